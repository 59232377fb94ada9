#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "virinv/cli/config.hpp"

namespace virinv::cli {

inline constexpr const char* kToolName = "virinv";
inline constexpr const char* kToolVersion = "0.1.0";
/// Overrides [run] output_dir; --out overrides both.
inline constexpr const char* kOutDirEnv = "VIRINV_OUT_DIR";

enum ExitStatus : int { kSuccess = 0, kConfigFailure = 1, kNumericFailure = 2 };

const std::vector<std::string>& subcommands();

struct RunOptions {
  std::string subcommand;
  std::optional<std::filesystem::path> config_path;
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

/// Runs one subcommand and writes its artifacts:
///   series.csv    plot-ready time series (sweep grid for cosmo)
///   scan.csv      mathieu only: alpha,beta,trace,class,exponent
///   summary.json  metrics, verdicts, effective configuration, tool version
///   run.log       timestamped sidecar; the only non-deterministic file
/// Diagnostics go to `err`. Returns an ExitStatus.
int run(const RunOptions& options, std::ostream& out, std::ostream& err);

/// Same, with an already parsed configuration.
int run(const std::string& subcommand, RunConfig config, const RunOptions& options, std::ostream& out,
        std::ostream& err);

}  // namespace virinv::cli
