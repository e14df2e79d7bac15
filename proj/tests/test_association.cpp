#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mabhet/association.hpp"
#include "mabhet/propagation.hpp"

#include <cmath>
#include <numeric>

using namespace mabhet;

namespace {

constexpr LinkClass kSbsLos{Tier::kSbs, Path::kLos};
constexpr LinkClass kSbsNlos{Tier::kSbs, Path::kNlos};
constexpr LinkClass kMbsLos{Tier::kMbs, Path::kLos};
constexpr LinkClass kMbsNlos{Tier::kMbs, Path::kNlos};

double
Sum(const auto& a)
{
    return std::accumulate(a.begin(), a.end(), 0.0);
}

} // namespace

TEST_CASE("exclusion radii")
{
    const SystemParams sys(SystemSettings{});
    const CacheParams cache(CacheSettings{});
    for (double r : {1.0, 25.0, 100.0, 700.0})
    {
        for (LinkClass c : kAllLinkClasses)
        {
            CHECK(ExclusionDistances(sys, cache, c, r)[c] == doctest::Approx(r).epsilon(1e-14));
        }
        const double d = ExclusionDistances(sys, cache, kSbsLos, r)[kSbsNlos];
        CHECK(d == doctest::Approx(std::pow(std::pow(10.0, -14.54) / std::pow(10.0, -10.38), 1.0 / 3.75) *
                                   std::pow(r, 2.09 / 3.75)));
    }

    // MBS over LoS at 100 m against the SBS LoS class: P_s B_s / (P_m B_m).
    const double ps = (9.1 - 0.1 - 100 * 3.2e7 * 2.5e-9) / 4.0;
    const double pm = (610.0 - 10.16 - 1000 * 3.2e7 * 2.5e-9) / 15.13;
    const double expected = std::pow(ps * 10.0 / (pm * 1.0), 1.0 / 2.09) * 100.0;
    CHECK(ExclusionDistances(sys, cache, kMbsLos, 100.0)[kSbsLos] == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("exclusion radii grow with the serving distance")
{
    const SystemParams sys(SystemSettings{});
    const CacheParams cache(CacheSettings{});
    for (LinkClass desired : kAllLinkClasses)
    {
        ExclusionSet prev = ExclusionDistances(sys, cache, desired, 0.5);
        for (double r = 1.0; r < 2000.0; r *= 1.5)
        {
            const ExclusionSet cur = ExclusionDistances(sys, cache, desired, r);
            for (LinkClass c : kAllLinkClasses)
            {
                CHECK(cur[c] > prev[c]);
                CHECK(cur[c] >= 0.0);
            }
            prev = cur;
        }
    }
}

TEST_CASE("thinned association masses are normalized")
{
    const SystemParams sys(SystemSettings{});
    for (const CacheParams& cache : {CacheParams(CacheSettings{}), CacheParams(CacheSettings{}).WithCacheSize(0),
                                     CacheParams::FourMegabitProfile(600)})
    {
        const AssociationMasses m = ComputeAssociationMasses(sys, cache);
        CHECK(Sum(m.user) == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(Sum(m.backhaul) == doctest::Approx(1.0).epsilon(1e-3));
        for (double v : m.user)
        {
            CHECK(v >= 0.0);
        }
    }
}

TEST_CASE("masses stay normalized in a blockage-rich network")
{
    SystemSettings s;
    s.beta = 0.2;
    s.lambda_s = 1e-5;
    s.lambda_m = 1e-7;
    s.bias_s = 1.0;
    const AssociationMasses m = ComputeAssociationMasses(SystemParams(s), CacheParams(CacheSettings{}));
    CHECK(Sum(m.user) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(Sum(m.backhaul) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("no competition leaves the nearest-distance density")
{
    SystemSettings s;
    s.beta = 0.0;
    s.lambda_m = 1e-18;
    const SystemParams sys(s);
    const CacheParams cache(CacheSettings{});
    for (double r : {2.0, 20.0, 80.0})
    {
        CHECK(AssociationDensity(sys, cache, kSbsLos, PdfMode::kThinned, r) ==
              doctest::Approx(NearestDistancePdf(sys, DistanceTarget::kSbs, Path::kLos, PdfMode::kThinned, r))
                  .epsilon(1e-9));
    }
}

TEST_CASE("bias dominance")
{
    SystemSettings s;
    s.bias_s = 1e9;
    const AssociationMasses m = ComputeAssociationMasses(SystemParams(s), CacheParams(CacheSettings{}));
    CHECK(m.tier(Tier::kSbs) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("denser tier wins at equal power and bias")
{
    SystemSettings s;
    s.p_tot_m = 9.1;
    s.p_fc_m = 0.1;
    s.rho_m = 4.0;
    s.bias_s = 1.0;
    CacheSettings c;
    c.w_ca = 0.0;
    const AssociationMasses m = ComputeAssociationMasses(SystemParams(s), CacheParams(c));
    CHECK(m.tier(Tier::kSbs) > m.tier(Tier::kMbs));
    // Identical tiers: shares follow the densities.
    CHECK(m.tier(Tier::kSbs) == doctest::Approx(10.0 / 11.0).epsilon(1e-4));
}

TEST_CASE("common power scaling leaves association unchanged")
{
    SystemSettings s;
    s.noise = ConstantWatts{1e-13};
    const CacheParams cache(CacheSettings{});
    const AssociationMasses base = ComputeAssociationMasses(SystemParams(s), cache);
    // Dividing both amplifier coefficients by K multiplies both transmit powers by K.
    const double k = 37.0;
    s.rho_s /= k;
    s.rho_m /= k;
    s.noise = ConstantWatts{1e-13 * k};
    const SystemParams scaled(s);
    const AssociationMasses m = ComputeAssociationMasses(scaled, cache);
    for (std::size_t i = 0; i < 4; ++i)
    {
        CHECK(m.user[i] == doctest::Approx(base.user[i]).epsilon(1e-9));
    }
    const ExclusionSet a = ExclusionDistances(SystemParams(SystemSettings{}), cache, kMbsNlos, 60.0);
    const ExclusionSet b = ExclusionDistances(scaled, cache, kMbsNlos, 60.0);
    for (LinkClass c : kAllLinkClasses)
    {
        CHECK(a[c] == doctest::Approx(b[c]).epsilon(1e-12));
    }
}

TEST_CASE("default masses")
{
    // Quadrature values frozen from the thinned model; checked against
    // simulation in the Monte Carlo suite.
    const AssociationMasses m = ComputeAssociationMasses(SystemParams(SystemSettings{}), CacheParams(CacheSettings{}));
    CHECK(m.user[Index(kSbsLos)] == doctest::Approx(0.732181).epsilon(1e-5));
    CHECK(m.user[Index(kMbsLos)] == doctest::Approx(0.267819).epsilon(1e-5));
    CHECK(m.user[Index(kSbsNlos)] < 1e-20);
    CHECK(m.user[Index(kMbsNlos)] < 1e-20);
}
