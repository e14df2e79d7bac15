#pragma once

#include "mabhet/coverage.hpp"
#include "mabhet/params.hpp"

#include <array>
#include <string_view>
#include <vector>

namespace mabhet {

/// Which coverage terms feed the four SBS cases.
enum class SbsCaseVariant
{
    kMatched,       ///< case (x, y) uses access coverage x and backhaul coverage y
    kAllLos, ///< every case uses the LoS access and LoS backhaul terms
};

enum class BindingSide
{
    kAccess,
    kBackhaul,
};

std::string_view ToString(BindingSide b) noexcept;

/// Case order inside AptBreakdown::sbs_case: (access, backhaul) paths.
inline constexpr std::array<std::array<Path, 2>, 4> kSbsCases{{
    {Path::kLos, Path::kLos},
    {Path::kLos, Path::kNlos},
    {Path::kNlos, Path::kLos},
    {Path::kNlos, Path::kNlos},
}};

inline constexpr std::array<std::string_view, 4> kSbsCaseNames{"r_ll", "r_ln", "r_nl", "r_nn"};

/// Area throughput split [bit/s/m^2].
struct AptBreakdown
{
    double r_total = 0.0;
    double r_sbs = 0.0;
    double r_mbs = 0.0;
    std::array<double, 4> sbs_case{};
    std::array<BindingSide, 4> binding{};
    double hit_ratio = 0.0;
    CoverageResult coverage;
};

struct AptOptions
{
    PdfMode mode = PdfMode::kThinned;
    SbsCaseVariant variant = SbsCaseVariant::kMatched;
};

/// Hit ratios this close to one leave the backhaul unconstrained.
inline constexpr double kFullHitThreshold = 1.0 - 1e-12;

/// Combines coverage (at gamma0 = coverage.gamma), hit ratio and partition.
/// Coverage does not depend on eta, so sweeps over eta reuse one CoverageResult.
AptBreakdown ComposeApt(const SystemParams& sys, const CoverageResult& coverage, double hit_ratio, double eta,
                        SbsCaseVariant variant = SbsCaseVariant::kMatched);

double AptMbs(const SystemParams& sys, const CacheParams& cache, double eta, double gamma0,
              const AptOptions& opts = {});
/// Breakdown with only the SBS-tier fields (and r_total = r_sbs) filled in.
AptBreakdown AptSbs(const SystemParams& sys, const CacheParams& cache, double eta, double gamma0,
                    const AptOptions& opts = {});
AptBreakdown AptTotal(const SystemParams& sys, const CacheParams& cache, double eta, double gamma0,
                      const AptOptions& opts = {});

struct EtaOptimum
{
    double eta = 0.0;
    double apt = 0.0;
    /// Several grid points share the maximum; eta is the leftmost of them.
    bool tie = false;
};

/// Uniform grid over [0, 1] then golden-section inside the best bracket.
EtaOptimum OptimizeEta(const SystemParams& sys, const CacheParams& cache, double gamma0, int grid_points = 41,
                       const AptOptions& opts = {});
/// Same search on a precomputed coverage.
EtaOptimum OptimizeEta(const SystemParams& sys, const CoverageResult& coverage, double hit_ratio,
                       int grid_points = 41, SbsCaseVariant variant = SbsCaseVariant::kMatched);

struct CachePoint
{
    int cache_size;
    double apt;
};

struct CacheOptimum
{
    int cache_size = 0;
    double apt = 0.0;
    std::vector<CachePoint> curve;
};

/// Grid search over feasible integer cache sizes 0, step, 2 step, ... up to the
/// largest size the SBS power budget allows (always included). Ties go to the
/// larger cache.
CacheOptimum OptimizeCache(const SystemParams& sys, const CacheParams& cache_template, double eta, double gamma0,
                           int step = 1, const AptOptions& opts = {});

} // namespace mabhet
