#include "mabhet/coverage.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace mabhet {

namespace detail {

namespace {

constexpr quad::Tolerance kInnerTol{1e-10, 1e-13, 18};
constexpr quad::Tolerance kOuterTol{1e-8, 1e-10, 18};

} // namespace

double
CoverageKernel::ClassExponent(double lambda, Path path, double strength, double d, double s) const
{
    if (lambda <= 0.0 || s <= 0.0)
    {
        return 0.0;
    }
    const double beta = assoc_.model().beta;
    const double alpha = assoc_.model().Exponent(path);
    const double inv_sk = 1.0 / (s * strength);
    // P_Y(t) t [1 - 1 / (1 + s K t^-alpha)] = P_Y(t) t / (1 + t^alpha / (s K))
    auto integrand = [&](double t) {
        return PathProbability(beta, path, t) * t / (1.0 + std::pow(t, alpha) * inv_sk);
    };
    double lo = d;
    if (path == Path::kNlos)
    {
        lo = std::max(lo, kLosRadius); // P_NL vanishes below 18 m
    }
    const double knee = std::pow(s * strength, 1.0 / alpha);
    std::vector<double> breaks;
    if (lo < kLosRadius)
    {
        breaks.push_back(kLosRadius);
    }
    if (knee > lo && std::isfinite(knee))
    {
        breaks.push_back(knee);
    }
    std::sort(breaks.begin(), breaks.end());
    const auto r = quad::IntegratePiecewise(integrand, lo, breaks, kInnerTol);
    return 2.0 * std::numbers::pi * lambda * r.value;
}

double
CoverageKernel::UserLaplace(LinkClass desired, double r, double s) const
{
    const LinkModel& m = assoc_.model();
    double exponent = 0.0;
    for (LinkClass c : kAllLinkClasses)
    {
        exponent += ClassExponent(m.density[Index(c.tier)], c.path, m.Strength(c), assoc_.UserRadius(desired, c, r),
                                  s);
    }
    return std::exp(-exponent);
}

double
CoverageKernel::BackhaulLaplace(Path desired, double r, double s) const
{
    const LinkModel& m = assoc_.model();
    double exponent = 0.0;
    for (Path p : {Path::kLos, Path::kNlos})
    {
        const LinkClass c{Tier::kMbs, p};
        exponent +=
            ClassExponent(m.density[Index(Tier::kMbs)], p, m.Strength(c), assoc_.BackhaulRadius(desired, p, r), s);
    }
    return std::exp(-exponent);
}

double
CoverageKernel::UserSuccess(LinkClass c, double r, double gamma) const
{
    const LinkModel& m = assoc_.model();
    const double x = std::pow(r, m.Exponent(c.path)) / m.Strength(c);
    const double noise_term = std::exp(-gamma * m.noise * x);
    if (noise_term == 0.0)
    {
        return 0.0;
    }
    return noise_term * UserLaplace(c, r, gamma * x);
}

double
CoverageKernel::BackhaulSuccess(Path p, double r, double gamma) const
{
    const LinkModel& m = assoc_.model();
    const double x = std::pow(r, m.Exponent(p)) / m.Strength({Tier::kMbs, p});
    const double noise_term = std::exp(-gamma * m.noise * x);
    if (noise_term == 0.0)
    {
        return 0.0;
    }
    return noise_term * BackhaulLaplace(p, r, gamma * x);
}

quad::Result
CoverageKernel::UserCoverage(LinkClass c, double gamma) const
{
    auto integrand = [&](double r) {
        const double f = assoc_.UserDensity(c, r);
        return f > 0.0 ? f * UserSuccess(c, r, gamma) : 0.0;
    };
    const auto breaks = assoc_.UserBreaks(c);
    return quad::IntegratePiecewise(integrand, 0.0, breaks, kOuterTol);
}

quad::Result
CoverageKernel::BackhaulCoverage(Path p, double gamma) const
{
    auto integrand = [&](double r) {
        const double f = assoc_.BackhaulDensity(p, r);
        return f > 0.0 ? f * BackhaulSuccess(p, r, gamma) : 0.0;
    };
    const auto breaks = assoc_.BackhaulBreaks(p);
    return quad::IntegratePiecewise(integrand, 0.0, breaks, kOuterTol);
}

} // namespace detail

namespace {

void
CheckLaplaceArgs(double r, double s)
{
    if (r < 0.0)
    {
        throw NegativeDistance("Laplace transform needs r > 0");
    }
    if (r == 0.0)
    {
        throw ZeroDistance("Laplace transform needs r > 0");
    }
    if (!(s >= 0.0))
    {
        throw InvalidParameter("s", "Laplace argument must be >= 0");
    }
}

void
CheckGamma(double gamma)
{
    if (!(gamma > 0.0))
    {
        throw InvalidParameter("gamma", "SINR threshold must be > 0 (linear)");
    }
}

} // namespace

double
LaplaceInterference(const SystemParams& sys, const CacheParams& cache, LinkClass desired, double r, double s)
{
    CheckLaplaceArgs(r, s);
    return detail::CoverageKernel(LinkModel::Build(sys, cache)).UserLaplace(desired, r, s);
}

double
BackhaulLaplaceInterference(const SystemParams& sys, const CacheParams& cache, Path desired, double r, double s)
{
    CheckLaplaceArgs(r, s);
    return detail::CoverageKernel(LinkModel::Build(sys, cache)).BackhaulLaplace(desired, r, s);
}

std::pair<double, double>
CoverageAccess(const SystemParams& sys, const CacheParams& cache, Tier tier, double gamma, PdfMode mode)
{
    CheckGamma(gamma);
    const detail::CoverageKernel k(LinkModel::Build(sys, cache), mode);
    return {k.UserCoverage({tier, Path::kLos}, gamma).value, k.UserCoverage({tier, Path::kNlos}, gamma).value};
}

std::pair<double, double>
CoverageBackhaul(const SystemParams& sys, const CacheParams& cache, double gamma, PdfMode mode)
{
    CheckGamma(gamma);
    const detail::CoverageKernel k(LinkModel::Build(sys, cache), mode);
    return {k.BackhaulCoverage(Path::kLos, gamma).value, k.BackhaulCoverage(Path::kNlos, gamma).value};
}

CoverageResult
ComputeCoverage(const SystemParams& sys, const CacheParams& cache, double gamma, PdfMode mode)
{
    CheckGamma(gamma);
    const detail::CoverageKernel k(LinkModel::Build(sys, cache), mode);
    CoverageResult out;
    out.gamma = gamma;
    for (LinkClass c : kAllLinkClasses)
    {
        const auto r = k.UserCoverage(c, gamma);
        out.access[Index(c)] = r.value;
        out.access_error[Index(c)] = r.error;
    }
    for (Path p : {Path::kLos, Path::kNlos})
    {
        const auto r = k.BackhaulCoverage(p, gamma);
        out.backhaul[Index(p)] = r.value;
        out.backhaul_error[Index(p)] = r.error;
    }
    return out;
}

} // namespace mabhet
