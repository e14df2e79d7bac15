#pragma once

#include "mabhet/association.hpp"
#include "mabhet/params.hpp"
#include "mabhet/propagation.hpp"
#include "mabhet/quadrature.hpp"

#include <array>
#include <utility>

namespace mabhet {

/// Coverage components at one SINR threshold. Each entry is the joint
/// probability of attaching over that class and clearing the threshold.
struct CoverageResult
{
    double gamma = 0.0; ///< linear threshold
    std::array<double, 4> access{};   ///< indexed like kAllLinkClasses
    std::array<double, 2> backhaul{}; ///< by Path index
    std::array<double, 4> access_error{};
    std::array<double, 2> backhaul_error{};

    double operator[](LinkClass c) const noexcept { return access[Index(c)]; }
    double backhaul_path(Path p) const noexcept { return backhaul[Index(p)]; }
    double tier(Tier t) const noexcept { return access[2 * Index(t)] + access[2 * Index(t) + 1]; }
    double backhaul_total() const noexcept { return backhaul[0] + backhaul[1]; }
};

/// E[exp(-s I)] for the interference seen by a user served by `desired` at r.
/// Interferers of each class lie beyond that class's exclusion radius.
double LaplaceInterference(const SystemParams& sys, const CacheParams& cache, LinkClass desired, double r, double s);

/// Same for an SBS backhauled over `desired` at r; only MBSs interfere.
double BackhaulLaplaceInterference(const SystemParams& sys, const CacheParams& cache, Path desired, double r,
                                   double s);

/// (LoS, NLoS) coverage of users served by `tier`.
std::pair<double, double> CoverageAccess(const SystemParams& sys, const CacheParams& cache, Tier tier, double gamma,
                                         PdfMode mode = PdfMode::kThinned);

/// (LoS, NLoS) backhaul coverage of a typical SBS.
std::pair<double, double> CoverageBackhaul(const SystemParams& sys, const CacheParams& cache, double gamma,
                                           PdfMode mode = PdfMode::kThinned);

/// All six components at once.
CoverageResult ComputeCoverage(const SystemParams& sys, const CacheParams& cache, double gamma,
                               PdfMode mode = PdfMode::kThinned);

namespace detail {

class CoverageKernel
{
  public:
    explicit CoverageKernel(const LinkModel& model, PdfMode mode = PdfMode::kThinned)
        : assoc_(model, mode)
    {
    }

    const AssociationKernel& association() const noexcept { return assoc_; }

    double UserLaplace(LinkClass desired, double r, double s) const;
    double BackhaulLaplace(Path desired, double r, double s) const;

    /// Conditional coverage given attachment over `c` at r.
    double UserSuccess(LinkClass c, double r, double gamma) const;
    double BackhaulSuccess(Path p, double r, double gamma) const;

    quad::Result UserCoverage(LinkClass c, double gamma) const;
    quad::Result BackhaulCoverage(Path p, double gamma) const;

  private:
    /// -log of the Laplace factor of one interfering class beyond radius d.
    double ClassExponent(double lambda, Path path, double strength, double d, double s) const;

    AssociationKernel assoc_;
};

} // namespace detail

} // namespace mabhet
