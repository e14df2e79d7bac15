#pragma once

#include "mabhet/apt.hpp"
#include "mabhet/errors.hpp"
#include "mabhet/montecarlo.hpp"
#include "mabhet/params.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mabhet::cli {

/// Config problem anchored at a position of the input document.
class ConfigError : public Error
{
  public:
    ConfigError(const std::string& where, std::string key, const std::string& what)
        : Error(where + ": " + key + ": " + what),
          key_(std::move(key))
    {
    }

    const std::string& key() const noexcept { return key_; }

  private:
    std::string key_;
};

enum class Engine
{
    kAnalytical,
    kMonteCarlo,
};

std::string_view ToString(Engine e) noexcept;

inline constexpr std::array<std::string_view, 5> kSweepAxes{"eta", "cache_size", "gamma0_db", "lambda_m",
                                                            "zipf_exponent"};

/// Every quantity a sweep row can carry.
inline constexpr std::array<std::string_view, 18> kQuantities{
    "apt_total",     "apt_sbs",      "apt_mbs",        "r_ll",          "r_ln",           "r_nl",
    "r_nn",          "hit_ratio",    "cov_sbs_los",    "cov_sbs_nlos",  "cov_mbs_los",    "cov_mbs_nlos",
    "cov_bh_los",    "cov_bh_nlos",  "assoc_sbs_los",  "assoc_sbs_nlos", "assoc_mbs_los", "assoc_mbs_nlos"};

struct SweepSpec
{
    std::string axis = "eta";
    /// Raw axis values (dB for gamma0_db). Empty means a single point at the
    /// configured value of the axis.
    std::vector<double> values;
    std::vector<Engine> engines{Engine::kAnalytical};
    std::vector<std::string> quantities{"apt_total"};
    std::string output = "results.csv";
};

struct McSettings
{
    std::size_t realizations = 20000;
    double r_sim = 3000.0;
    std::uint64_t seed = 1;
    mc::Estimator estimator = mc::Estimator::kIndicator;
    mc::ImportanceSampling importance{};
    double los_tail_radius = 1e5;

    mc::SimulationOptions Options() const { return {realizations, r_sim, seed, importance, los_tail_radius}; }
};

struct RunConfig
{
    SystemSettings system{};
    double gamma0_db = 10.0;
    PdfMode pdf_mode = PdfMode::kThinned;
    SbsCaseVariant sbs_cases = SbsCaseVariant::kMatched;
    CacheSettings cache{};
    double eta = 0.5;
    SweepSpec sweep{};
    McSettings mc{};

    /// Name of the parsed document, used in error positions.
    std::string source = "<config>";
    /// Dotted key -> "line:column" (1-based) of every key present in the document.
    std::map<std::string, std::string> positions;

    AptOptions Apt() const { return {pdf_mode, sbs_cases}; }
    /// Sweep values, or the single configured value of the axis.
    std::vector<double> AxisValues() const;
    /// Copy with the sweep axis set to `value`.
    RunConfig AtAxis(double value) const;
    /// "source:line:col" of the key, falling back to its parent sections.
    std::string Where(const std::string& key) const;
};

/// Parses YAML text. Unknown keys and malformed values raise ConfigError.
RunConfig ParseConfig(const std::string& text, const std::string& source = "<config>");
RunConfig LoadConfig(const std::string& path);

/// Builds every parameter object the run needs (including each sweep point)
/// and rethrows failures as ConfigError anchored at the offending key.
void ValidateConfig(const RunConfig& cfg);

/// YAML with every default materialized; parsing it back yields the same run.
std::string EmitResolved(const RunConfig& cfg);

} // namespace mabhet::cli
