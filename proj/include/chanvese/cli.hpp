#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "chanvese/error.hpp"
#include "chanvese/metrics.hpp"
#include "chanvese/solver.hpp"

namespace chanvese::cli {

/// Process exit statuses.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIo = 2,
  kParameter = 3,
  kNumerical = 4,
  kDegenerate = 5,
};

class UsageError : public Error {
 public:
  using Error::Error;
};

struct InitSpec {
  enum class Kind { DefaultCircle, Circle, Mask };
  Kind kind = Kind::DefaultCircle;
  double cx = 0.0, cy = 0.0, r = 0.0;
  std::filesystem::path mask_path;
};

/// Parses "circle:cx,cy,r" or "mask:path".
InitSpec parse_init_spec(const std::string& text);

struct CliConfig {
  std::filesystem::path input;
  std::filesystem::path out_dir = ".";
  SolverParams params;
  InitSpec init;
  std::optional<double> smooth_sigma;
  std::optional<std::filesystem::path> ground_truth;
  bool baseline = false;
  int overlay_every = 0;  // 0 = no snapshots
  OtsuPolarity otsu_polarity = OtsuPolarity::BrightInside;
};

/// Throws UsageError for unknown flags, missing input, conflicting init
/// specs and unparsable values. Returns std::nullopt after printing help.
std::optional<CliConfig> parse_config(int argc, const char* const* argv, std::ostream& out);

/// Loads, segments and writes mask.pgm, overlay.png, energy.csv and, when a
/// ground truth or the baseline is requested, metrics.json.
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

/// parse_config() + run() with every failure mapped to an ExitCode.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// One CSV row per trace record, 6 significant digits.
std::string format_energy_csv(const EnergyTrace& trace);

}  // namespace chanvese::cli
