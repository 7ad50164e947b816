#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace vatsim::cli {

/// Exit codes are a stable scripting contract.
enum ExitCode : int { kOk = 0, kInputError = 1, kNonConvergence = 2 };

struct SyntheticSource {
    std::uint64_t seed = 0;
    std::size_t size = 0;
};

struct RunConfig {
    std::string schedule_path;
    std::optional<std::string> households_path;
    std::optional<SyntheticSource> synthetic;
    std::optional<double> target_burden;
    std::string out;
    bool trace = false;
    unsigned threads = 1;
    std::vector<std::string> scenarios;
    std::vector<std::string> removals;
};

/// Parses "seed:n".
SyntheticSource parse_synthetic(const std::string& spec);

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vatsim::cli
