#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace aggsim::cli {

// Budget grid syntax: "lo..hi:step" (inclusive) or a single value, e.g.
// "0..150:15" or "75".
std::vector<std::int64_t> parse_grid(const std::string& text);

// Runs one CLI invocation (args exclude the program name). Returns 0 on
// success, 2 on domain errors (parse/estimation/validation), and the CLI11
// code on usage errors. All diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace aggsim::cli
