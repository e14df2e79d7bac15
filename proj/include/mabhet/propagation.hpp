#pragma once

#include "mabhet/params.hpp"

namespace mabhet {

/// Distance below which every link is LoS.
inline constexpr double kLosRadius = 18.0;

/// Which nearest-distance density to use: the blockage-thinned one (exact for
/// independent per-link blockage) or the unthinned void factor exp(-pi r^2 lambda).
enum class PdfMode
{
    kThinned,
    kUnthinned,
};

/// Receiver side of a nearest-distance density.
enum class DistanceTarget
{
    kSbs,         ///< user to nearest SBS
    kMbs,         ///< user to nearest MBS
    kBackhaulMbs, ///< SBS to nearest MBS
};

struct PathSample
{
    double distance;
    Path path;
    double loss;
};

/// P_L(r) = min(18/r, 1)(1 - e^{-beta r}) + e^{-beta r}.
double LosProbability(const SystemParams& sys, double r);
double NlosProbability(const SystemParams& sys, double r);
double PathProbability(const SystemParams& sys, Path path, double r);

/// Linear gain A_X r^{-alpha_X}. Throws NegativeDistance / ZeroDistance.
double PathLoss(const SystemParams& sys, double r, Path path);
PathSample MakePathSample(const SystemParams& sys, double r, Path path);

double NearestDistancePdf(const SystemParams& sys, DistanceTarget target, Path path, PdfMode mode, double r);

/// Distance beyond which NLoS loss exceeds LoS loss, (A_NL/A_L)^{1/(alpha_NL-alpha_L)}.
double PathLossCrossover(const SystemParams& sys);

namespace detail {

// Unchecked kernels shared with the association/coverage/simulation code.

inline double
LosProbability(double beta, double r) noexcept
{
    if (r <= kLosRadius)
    {
        return 1.0;
    }
    const double e = std::exp(-beta * r);
    return kLosRadius / r * (1.0 - e) + e;
}

inline double
PathProbability(double beta, Path path, double r) noexcept
{
    const double pl = LosProbability(beta, r);
    return path == Path::kLos ? pl : 1.0 - pl;
}

/// int_0^d P_X(t) t dt, closed form.
double PathAreaIntegral(double beta, Path path, double d) noexcept;

} // namespace detail

} // namespace mabhet
