#include "mabhet/association.hpp"

#include "mabhet/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mabhet {

namespace detail {

double
AssociationKernel::UserRadius(LinkClass desired, LinkClass competitor, double r) const noexcept
{
    if (desired == competitor)
    {
        return r;
    }
    const double alpha_d = m_.Exponent(desired.path);
    const double alpha_c = m_.Exponent(competitor.path);
    return std::pow(m_.Strength(competitor) / m_.Strength(desired), 1.0 / alpha_c) *
           std::pow(r, alpha_d / alpha_c);
}

double
AssociationKernel::BackhaulRadius(Path desired, Path competitor, double r) const noexcept
{
    if (desired == competitor)
    {
        return r;
    }
    const double alpha_d = m_.Exponent(desired);
    const double alpha_c = m_.Exponent(competitor);
    return std::pow(m_.intercept[Index(competitor)] / m_.intercept[Index(desired)], 1.0 / alpha_c) *
           std::pow(r, alpha_d / alpha_c);
}

double
AssociationKernel::VoidProbability(double lambda, Path path, double d) const noexcept
{
    if (lambda <= 0.0)
    {
        return 1.0;
    }
    return std::exp(-2.0 * std::numbers::pi * lambda * PathAreaIntegral(m_.beta, path, d));
}

double
AssociationKernel::NearestPdf(double lambda, Path path, double r) const noexcept
{
    if (lambda <= 0.0 || r <= 0.0)
    {
        return 0.0;
    }
    const double void_term =
        mode_ == PdfMode::kThinned ? VoidProbability(lambda, path, r) : std::exp(-std::numbers::pi * r * r * lambda);
    return PathProbability(m_.beta, path, r) * void_term * 2.0 * std::numbers::pi * lambda * r;
}

double
AssociationKernel::UserDensity(LinkClass target, double r) const noexcept
{
    double f = NearestPdf(m_.density[Index(target.tier)], target.path, r);
    if (f == 0.0)
    {
        return 0.0;
    }
    for (LinkClass c : kAllLinkClasses)
    {
        if (c == target)
        {
            continue;
        }
        f *= VoidProbability(m_.density[Index(c.tier)], c.path, UserRadius(target, c, r));
    }
    return f;
}

double
AssociationKernel::BackhaulDensity(Path target, double r) const noexcept
{
    const double lambda = m_.density[Index(Tier::kMbs)];
    double f = NearestPdf(lambda, target, r);
    if (f == 0.0)
    {
        return 0.0;
    }
    const Path other = target == Path::kLos ? Path::kNlos : Path::kLos;
    return f * VoidProbability(lambda, other, BackhaulRadius(target, other, r));
}

namespace {

void
SortUnique(std::vector<double>& v)
{
    std::erase_if(v, [](double x) { return !(x > 0.0) || !std::isfinite(x); });
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

} // namespace

std::vector<double>
AssociationKernel::UserBreaks(LinkClass target) const
{
    std::vector<double> breaks{kLosRadius};
    const double alpha_d = m_.Exponent(target.path);
    for (LinkClass c : kAllLinkClasses)
    {
        if (c == target)
        {
            continue;
        }
        // Solve UserRadius(target, c, r) = 18.
        const double alpha_c = m_.Exponent(c.path);
        const double k = std::pow(m_.Strength(c) / m_.Strength(target), 1.0 / alpha_c);
        breaks.push_back(std::pow(kLosRadius / k, alpha_c / alpha_d));
    }
    SortUnique(breaks);
    return breaks;
}

std::vector<double>
AssociationKernel::BackhaulBreaks(Path target) const
{
    const Path other = target == Path::kLos ? Path::kNlos : Path::kLos;
    const double alpha_d = m_.Exponent(target);
    const double alpha_c = m_.Exponent(other);
    const double k = std::pow(m_.intercept[Index(other)] / m_.intercept[Index(target)], 1.0 / alpha_c);
    std::vector<double> breaks{kLosRadius, std::pow(kLosRadius / k, alpha_c / alpha_d)};
    SortUnique(breaks);
    return breaks;
}

} // namespace detail

ExclusionSet
ExclusionDistances(const SystemParams& sys, const CacheParams& cache, LinkClass desired, double r)
{
    if (r < 0.0)
    {
        throw NegativeDistance("exclusion distances need r > 0");
    }
    if (r == 0.0)
    {
        throw ZeroDistance("exclusion distances need r > 0");
    }
    const detail::AssociationKernel k(LinkModel::Build(sys, cache));
    ExclusionSet out{};
    for (LinkClass c : kAllLinkClasses)
    {
        out.radius[Index(c)] = k.UserRadius(desired, c, r);
    }
    return out;
}

double
AssociationDensity(const SystemParams& sys, const CacheParams& cache, LinkClass target, PdfMode mode, double r)
{
    if (r < 0.0)
    {
        throw NegativeDistance("association density needs r >= 0");
    }
    return detail::AssociationKernel(LinkModel::Build(sys, cache), mode).UserDensity(target, r);
}

double
BackhaulAssociationDensity(const SystemParams& sys, const CacheParams& cache, Path path, PdfMode mode, double r)
{
    if (r < 0.0)
    {
        throw NegativeDistance("association density needs r >= 0");
    }
    return detail::AssociationKernel(LinkModel::Build(sys, cache), mode).BackhaulDensity(path, r);
}

AssociationMasses
ComputeAssociationMasses(const SystemParams& sys, const CacheParams& cache, PdfMode mode)
{
    const detail::AssociationKernel k(LinkModel::Build(sys, cache), mode);
    AssociationMasses out;
    for (LinkClass c : kAllLinkClasses)
    {
        const auto breaks = k.UserBreaks(c);
        const auto r = quad::IntegratePiecewise([&](double x) { return k.UserDensity(c, x); }, 0.0, breaks);
        out.user[Index(c)] = r.value;
        out.quadrature_error += r.error;
    }
    for (Path p : {Path::kLos, Path::kNlos})
    {
        const auto breaks = k.BackhaulBreaks(p);
        const auto r = quad::IntegratePiecewise([&](double x) { return k.BackhaulDensity(p, x); }, 0.0, breaks);
        out.backhaul[Index(p)] = r.value;
        out.quadrature_error += r.error;
    }
    return out;
}

} // namespace mabhet
