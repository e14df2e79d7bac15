#include "mabhet/apt.hpp"

#include "mabhet/caching.hpp"
#include "mabhet/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mabhet {

std::string_view
ToString(BindingSide b) noexcept
{
    return b == BindingSide::kAccess ? "access" : "backhaul";
}

namespace {

void
CheckEta(double eta)
{
    SpectrumPartition{eta}; // throws on out-of-range
}

} // namespace

AptBreakdown
ComposeApt(const SystemParams& sys, const CoverageResult& cov, double hit_ratio, double eta, SbsCaseVariant variant)
{
    CheckEta(eta);
    if (!(hit_ratio >= 0.0 && hit_ratio <= 1.0))
    {
        throw InvalidParameter("hit_ratio", "must lie in [0, 1]");
    }
    const SpectrumPartition part(eta);
    const double w = sys->total_bandwidth_hz;
    const double spectral = std::log2(1.0 + cov.gamma);
    const double access_scale = sys->lambda_s * part.AccessBandwidth(w) * spectral;
    const bool unconstrained = hit_ratio >= kFullHitThreshold;
    const double backhaul_scale =
        unconstrained ? 0.0 : sys->lambda_m * part.BackhaulBandwidth(w) * spectral / (1.0 - hit_ratio);

    AptBreakdown out;
    out.hit_ratio = hit_ratio;
    out.coverage = cov;
    for (std::size_t i = 0; i < kSbsCases.size(); ++i)
    {
        Path access_path = kSbsCases[i][0];
        Path backhaul_path = kSbsCases[i][1];
        if (variant == SbsCaseVariant::kAllLos)
        {
            access_path = Path::kLos;
            backhaul_path = Path::kLos;
        }
        const double access = access_scale * cov[{Tier::kSbs, access_path}];
        if (unconstrained)
        {
            out.sbs_case[i] = access;
            out.binding[i] = BindingSide::kAccess;
            continue;
        }
        const double backhaul = backhaul_scale * cov.backhaul_path(backhaul_path);
        out.binding[i] = access <= backhaul ? BindingSide::kAccess : BindingSide::kBackhaul;
        out.sbs_case[i] = std::min(access, backhaul);
    }
    for (double v : out.sbs_case)
    {
        out.r_sbs += v;
    }
    out.r_mbs = sys->lambda_m * part.AccessBandwidth(w) * spectral * cov.tier(Tier::kMbs);
    out.r_total = out.r_sbs + out.r_mbs;
    return out;
}

double
AptMbs(const SystemParams& sys, const CacheParams& cache, double eta, double gamma0, const AptOptions& opts)
{
    CheckEta(eta);
    const auto [los, nlos] = CoverageAccess(sys, cache, Tier::kMbs, gamma0, opts.mode);
    return sys->lambda_m * eta * sys->total_bandwidth_hz * std::log2(1.0 + gamma0) * (los + nlos);
}

AptBreakdown
AptSbs(const SystemParams& sys, const CacheParams& cache, double eta, double gamma0, const AptOptions& opts)
{
    AptBreakdown out = AptTotal(sys, cache, eta, gamma0, opts);
    out.r_mbs = 0.0;
    out.r_total = out.r_sbs;
    return out;
}

AptBreakdown
AptTotal(const SystemParams& sys, const CacheParams& cache, double eta, double gamma0, const AptOptions& opts)
{
    CheckEta(eta);
    const CoverageResult cov = ComputeCoverage(sys, cache, gamma0, opts.mode);
    return ComposeApt(sys, cov, CacheHitRatio(cache), eta, opts.variant);
}

EtaOptimum
OptimizeEta(const SystemParams& sys, const CoverageResult& cov, double hit_ratio, int grid_points,
            SbsCaseVariant variant)
{
    if (grid_points < 3)
    {
        throw InvalidParameter("grid_points", "eta grid needs at least 3 points");
    }
    auto apt = [&](double eta) { return ComposeApt(sys, cov, hit_ratio, eta, variant).r_total; };

    const double h = 1.0 / (grid_points - 1);
    std::vector<double> values(grid_points);
    for (int i = 0; i < grid_points; ++i)
    {
        values[i] = apt(std::min(1.0, i * h));
    }
    const auto best_it = std::max_element(values.begin(), values.end());
    const int best = static_cast<int>(best_it - values.begin());
    EtaOptimum out{std::min(1.0, best * h), *best_it, std::count(values.begin(), values.end(), *best_it) > 1};
    if (out.tie)
    {
        return out;
    }

    // Golden-section refinement inside the neighbouring grid cells.
    constexpr double kInvPhi = 0.6180339887498949;
    double lo = std::max(0.0, (best - 1) * h);
    double hi = std::min(1.0, (best + 1) * h);
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = apt(x1);
    double f2 = apt(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-12; ++it)
    {
        if (f1 < f2)
        {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = apt(x2);
        }
        else
        {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = apt(x1);
        }
    }
    const double x = f1 >= f2 ? x1 : x2;
    const double fx = std::max(f1, f2);
    if (fx > out.apt)
    {
        out.eta = x;
        out.apt = fx;
    }
    return out;
}

EtaOptimum
OptimizeEta(const SystemParams& sys, const CacheParams& cache, double gamma0, int grid_points,
            const AptOptions& opts)
{
    const CoverageResult cov = ComputeCoverage(sys, cache, gamma0, opts.mode);
    return OptimizeEta(sys, cov, CacheHitRatio(cache), grid_points, opts.variant);
}

CacheOptimum
OptimizeCache(const SystemParams& sys, const CacheParams& cache_template, double eta, double gamma0, int step,
              const AptOptions& opts)
{
    CheckEta(eta);
    if (step < 1)
    {
        throw InvalidParameter("step", "cache grid step must be >= 1");
    }
    const int c_max = MaxFeasibleCacheSize(sys, cache_template);
    if (c_max < 0)
    {
        throw NonPositiveTxPower("no feasible cache size");
    }
    std::vector<int> sizes;
    for (int c = 0; c <= c_max; c += step)
    {
        sizes.push_back(c);
    }
    if (sizes.back() != c_max)
    {
        sizes.push_back(c_max);
    }

    const PopularityProfile popularity(cache_template);
    // Backhaul coverage does not depend on the SBS cache.
    const CoverageResult reference = ComputeCoverage(sys, cache_template.WithCacheSize(0), gamma0, opts.mode);

    CacheOptimum out;
    out.curve.resize(sizes.size());
    ParallelFor(sizes.size(), [&](std::size_t i) {
        const CacheParams cache = cache_template.WithCacheSize(sizes[i]);
        const detail::CoverageKernel k(LinkModel::Build(sys, cache), opts.mode);
        CoverageResult cov = reference;
        for (LinkClass c : kAllLinkClasses)
        {
            const auto r = k.UserCoverage(c, gamma0);
            cov.access[Index(c)] = r.value;
            cov.access_error[Index(c)] = r.error;
        }
        const double apt = ComposeApt(sys, cov, popularity.HeadMass(sizes[i]), eta, opts.variant).r_total;
        out.curve[i] = {sizes[i], apt};
    });

    out.apt = -std::numeric_limits<double>::infinity();
    for (const CachePoint& p : out.curve)
    {
        if (p.apt >= out.apt)
        {
            out.apt = p.apt;
            out.cache_size = p.cache_size;
        }
    }
    return out;
}

} // namespace mabhet
