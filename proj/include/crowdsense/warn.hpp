#pragma once

#include <functional>
#include <string>

namespace crowdsense {

using WarnHandler = std::function<void(const std::string&)>;

// Non-fatal diagnostics (degenerate-but-legal inputs). Default handler
// prints to stderr; tests install a capture handler.
void warn(const std::string& message);
WarnHandler set_warn_handler(WarnHandler handler);

}  // namespace crowdsense
