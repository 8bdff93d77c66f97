#pragma once

#include <filesystem>
#include <vector>

#include "cli/config.hpp"

namespace lk::cli {

struct RunResult {
    std::vector<std::string> files;  // emitted artifacts, in emission order
    std::string summary;             // one-line human summary for stdout
};

RunResult run_spectrum(const RunConfig& cfg, const std::filesystem::path& out_dir);
RunResult run_evolve(const RunConfig& cfg, const std::filesystem::path& out_dir);
RunResult run_partition(const RunConfig& cfg, const std::filesystem::path& out_dir);
RunResult run_rates_dump(const RunConfig& cfg, const std::filesystem::path& out_dir);
RunResult run_compare(const RunConfig& cfg, const std::filesystem::path& out_dir);

RunResult run_mode(Mode mode, const RunConfig& cfg,
                   const std::filesystem::path& out_dir);

// Program entry shared between the binary and the tests. Returns the process
// exit code: 0 success (overflow in a CM run is data, not an error),
// 2 config errors, 3 numeric failures.
int run_main(const std::vector<std::string>& args);

}  // namespace lk::cli
