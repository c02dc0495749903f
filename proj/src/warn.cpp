#include "crowdsense/warn.hpp"

#include <cstdio>
#include <utility>

namespace crowdsense {

namespace {

WarnHandler& handler_ref() {
    static WarnHandler handler = [](const std::string& msg) {
        std::fprintf(stderr, "warning: %s\n", msg.c_str());
    };
    return handler;
}

}  // namespace

void warn(const std::string& message) {
    handler_ref()(message);
}

WarnHandler set_warn_handler(WarnHandler handler) {
    WarnHandler old = std::move(handler_ref());
    handler_ref() = std::move(handler);
    return old;
}

}  // namespace crowdsense
