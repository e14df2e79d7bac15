#pragma once

#include "mabhet/cli/config.hpp"
#include "mabhet/cli/csv.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace mabhet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

inline const std::vector<std::string> kResultColumns{"axis", "axis_value", "axis_linear", "engine", "quantity",
                                                     "value", "stderr", "n", "seed", "status"};
/// Monte Carlo golden-file layout.
inline const std::vector<std::string> kGoldenColumns{"quantity", "class", "gamma_db", "estimate", "stderr", "n",
                                                     "seed"};
inline const std::vector<std::string> kCompareColumns{"quantity", "class", "gamma_db", "analytical", "estimate",
                                                      "stderr", "abs_diff", "n", "seed"};

struct ArtifactPaths
{
    std::string results;
    std::string resolved;
    std::string manifest;
};

/// Results go to sweep.output (relative paths resolved against out_dir);
/// the echo and the manifest sit next to it.
ArtifactPaths ResolveArtifacts(const RunConfig& cfg, const std::string& out_dir);

/// Evaluates the sweep row by row. Numerical failures propagate after a
/// failure marker row has been written.
void RunSweep(const RunConfig& cfg, CsvWriter& csv);

int RunCommand(const std::string& config_path, const std::string& out_dir, std::ostream& log);
int ValidateCommand(const std::string& config_path, std::ostream& log);
int McCompareCommand(const std::string& config_path, const std::string& out_dir, std::ostream& log);

struct FigureOptions
{
    std::string out_dir = "figures";
    int cache_step = 10;
    int eta_points = 41;
};

int FiguresCommand(const FigureOptions& opts, std::ostream& log);

} // namespace mabhet::cli
