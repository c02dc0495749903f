#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "crowdsense/config.hpp"
#include "crowdsense/experiments.hpp"

namespace crowdsense {

// Filesystem failures while emitting results; carries the offending path in
// the message.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunOptions {
    std::string out_dir = "out";
    std::uint64_t seed_offset = 0;
    unsigned parallel = 1;
    std::optional<SolverKind> solver_override;
};

// Doubles rendered with 9 significant digits; integers stay integral. This
// is the one formatting used in every emitted table.
std::string format_number(double value);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// Executes one CLI command: runs the experiment, writes the result CSVs, a
// deterministic summary.json, and a manifest.json with config hash and wall
// clock. Returns the list of files written (absolute or out-relative paths).
std::vector<std::string> run_command(const ExperimentConfig& config, const std::string& command,
                                     const RunOptions& options);

}  // namespace crowdsense
