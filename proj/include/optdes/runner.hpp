#ifndef OPTDES_RUNNER_HPP
#define OPTDES_RUNNER_HPP

#include <filesystem>

#include "optdes/config.hpp"

namespace optdes {

// process exit codes; nonzero runs leave an error.json in the output dir
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;         // unexpected runtime failure
inline constexpr int kExitConfig = 2;          // schema violation
inline constexpr int kExitInfeasible = 3;      // solver infeasibility
inline constexpr int kExitModelMismatch = 4;   // preset/theta mismatch
inline constexpr int kExitExternalParams = 5;  // preset needs external inputs

/// A preset run that cannot proceed without user-supplied parameters.
class ExternalParamsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Executes one pipeline, writing design/report/trace artifacts under
/// cfg.out_dir. Returns a process exit code.
int run(const RunConfig& cfg);

/// Parses the file, applies the config, maps errors to exit codes.
int run_config_file(const std::filesystem::path& config_path);

/// Benchmark reproductions with the published spaces and parameters:
/// app1_case_i, app1_case_ii, app2, app3, app4. Writes a comparison table
/// of obtained vs reference numbers alongside the usual artifacts.
int run_preset(const std::string& app_id, const Json& overrides,
               const std::filesystem::path& out_dir, std::uint64_t seed,
               int restarts_override);

}  // namespace optdes

#endif
