#pragma once

#include "mabhet/params.hpp"
#include "mabhet/propagation.hpp"

#include <array>
#include <vector>

namespace mabhet {

/// Radii inside which a BS of each class would beat the serving link at
/// distance r on biased received power. Indexed like kAllLinkClasses.
struct ExclusionSet
{
    std::array<double, 4> radius;

    double operator[](LinkClass c) const noexcept { return radius[Index(c)]; }
};

/// Max-biased-power association of a user at the origin.
ExclusionSet ExclusionDistances(const SystemParams& sys, const CacheParams& cache, LinkClass desired, double r);

/// Joint density that the user attaches to a BS of class `target` at distance r.
double AssociationDensity(const SystemParams& sys, const CacheParams& cache, LinkClass target, PdfMode mode,
                          double r);

/// Joint density that an SBS attaches to an MBS over `path` at distance r.
double BackhaulAssociationDensity(const SystemParams& sys, const CacheParams& cache, Path path, PdfMode mode,
                                  double r);

struct AssociationMasses
{
    std::array<double, 4> user{};    ///< indexed like kAllLinkClasses
    std::array<double, 2> backhaul{}; ///< by Path index
    double quadrature_error = 0.0;

    double tier(Tier t) const noexcept { return user[2 * Index(t)] + user[2 * Index(t) + 1]; }
};

AssociationMasses ComputeAssociationMasses(const SystemParams& sys, const CacheParams& cache,
                                           PdfMode mode = PdfMode::kThinned);

namespace detail {

/// Association geometry on a prebuilt LinkModel.
class AssociationKernel
{
  public:
    explicit AssociationKernel(const LinkModel& model, PdfMode mode = PdfMode::kThinned)
        : m_(model),
          mode_(mode)
    {
    }

    const LinkModel& model() const noexcept { return m_; }

    /// Competing-class exclusion radius for a user served by `desired` at r.
    double UserRadius(LinkClass desired, LinkClass competitor, double r) const noexcept;
    /// Other-path MBS exclusion radius for an SBS served over `desired` at r.
    double BackhaulRadius(Path desired, Path competitor, double r) const noexcept;

    /// exp(-2 pi lambda int_0^d P_Y(t) t dt).
    double VoidProbability(double lambda, Path path, double d) const noexcept;

    double NearestPdf(double lambda, Path path, double r) const noexcept;

    double UserDensity(LinkClass target, double r) const noexcept;
    double BackhaulDensity(Path target, double r) const noexcept;

    /// Radii where the integrand has a kink (r = 18 and where an exclusion
    /// radius crosses 18), sorted.
    std::vector<double> UserBreaks(LinkClass target) const;
    std::vector<double> BackhaulBreaks(Path target) const;

  private:
    LinkModel m_;
    PdfMode mode_;
};

} // namespace detail

} // namespace mabhet
