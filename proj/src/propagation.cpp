#include "mabhet/propagation.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace mabhet {

namespace {

void
RequireNonNegative(double r)
{
    if (r < 0.0 || std::isnan(r))
    {
        throw NegativeDistance("distance " + std::to_string(r) + " m is negative");
    }
}

} // namespace

double
detail::PathAreaIntegral(double beta, Path path, double d) noexcept
{
    if (d <= 0.0)
    {
        return 0.0;
    }
    const double full = 0.5 * d * d;
    if (d <= kLosRadius)
    {
        return path == Path::kLos ? full : 0.0;
    }
    // NLoS part: int_0^{d-18} u (1 - e^{-beta (u + 18)}) du
    //   = span^2/2 (1 - e^{-18 beta}) + e^{-18 beta} g(beta span) / beta^2,
    // g(x) = x^2/2 - 1 + e^{-x} (1 + x).
    const double span = d - kLosRadius;
    const double x = beta * span;
    double g_scaled; // g(x) / beta^2
    if (x < 1.0)
    {
        // g(x) = sum_{k>=3} (-1)^{k+1} (k-1) x^k / k!
        double term = span * span * x / 6.0; // x^3/3! over beta^2
        double sum = 0.0;
        for (int k = 3; k < 40 && term != 0.0; ++k)
        {
            sum += (k % 2 == 1 ? 1.0 : -1.0) * (k - 1) * term;
            term *= x / (k + 1);
        }
        g_scaled = sum;
    }
    else
    {
        g_scaled = (0.5 * x * x - 1.0 + std::exp(-x) * (1.0 + x)) / (beta * beta);
    }
    const double nlos =
        -0.5 * span * span * std::expm1(-beta * kLosRadius) + std::exp(-beta * kLosRadius) * g_scaled;
    const double los = full - nlos;
    return path == Path::kLos ? los : std::max(nlos, 0.0);
}

double
LosProbability(const SystemParams& sys, double r)
{
    RequireNonNegative(r);
    return detail::LosProbability(sys->beta, r);
}

double
NlosProbability(const SystemParams& sys, double r)
{
    return 1.0 - LosProbability(sys, r);
}

double
PathProbability(const SystemParams& sys, Path path, double r)
{
    return path == Path::kLos ? LosProbability(sys, r) : NlosProbability(sys, r);
}

double
PathLoss(const SystemParams& sys, double r, Path path)
{
    RequireNonNegative(r);
    if (r == 0.0)
    {
        throw ZeroDistance("path loss is undefined at r = 0");
    }
    return sys.intercept(path) * std::pow(r, -sys.exponent(path));
}

PathSample
MakePathSample(const SystemParams& sys, double r, Path path)
{
    return {r, path, PathLoss(sys, r, path)};
}

double
NearestDistancePdf(const SystemParams& sys, DistanceTarget target, Path path, PdfMode mode, double r)
{
    RequireNonNegative(r);
    const double lambda = target == DistanceTarget::kSbs ? sys->lambda_s : sys->lambda_m;
    const double two_pi_lambda = 2.0 * std::numbers::pi * lambda;
    const double void_exponent = mode == PdfMode::kThinned
                                     ? two_pi_lambda * detail::PathAreaIntegral(sys->beta, path, r)
                                     : std::numbers::pi * r * r * lambda;
    return detail::PathProbability(sys->beta, path, r) * std::exp(-void_exponent) * two_pi_lambda * r;
}

double
PathLossCrossover(const SystemParams& sys)
{
    return std::pow(sys->a_nlos / sys->a_los, 1.0 / (sys->alpha_nlos - sys->alpha_los));
}

} // namespace mabhet
