#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mabhet/coverage.hpp"
#include "mabhet/montecarlo.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

using namespace mabhet;
using namespace mabhet::mc;

namespace {

constexpr LinkClass kSbsLos{Tier::kSbs, Path::kLos};
constexpr LinkClass kMbsNlos{Tier::kMbs, Path::kNlos};

bool
SameOutcome(const LinkOutcome& a, const LinkOutcome& b)
{
    return a.served == b.served && a.serving == b.serving && a.distance == b.distance &&
           a.mean_signal == b.mean_signal && a.fading == b.fading && a.interference == b.interference;
}

bool
SameSamples(const SampleSet& a, const SampleSet& b)
{
    if (a.access.size() != b.access.size() || a.miss_draw != b.miss_draw || a.access_weight != b.access_weight ||
        a.backhaul_weight != b.backhaul_weight)
    {
        return false;
    }
    for (std::size_t i = 0; i < a.access.size(); ++i)
    {
        if (!SameOutcome(a.access[i], b.access[i]) || !SameOutcome(a.backhaul[i], b.backhaul[i]))
        {
            return false;
        }
    }
    return true;
}

double
Z(const McEstimate& a, double expected)
{
    return std::abs(a.estimate - expected) / a.std_error.value();
}

} // namespace

TEST_CASE("stream seeds")
{
    CHECK(DeriveStreamSeed(1, 0) == DeriveStreamSeed(1, 0));
    CHECK(DeriveStreamSeed(1, 0) != DeriveStreamSeed(1, 1));
    CHECK(DeriveStreamSeed(1, 5) != DeriveStreamSeed(2, 5));
}

TEST_CASE("realizations replay exactly")
{
    const SystemParams sys(SystemSettings{});
    const PppRealization a = SampleRealization(sys, 500.0, 7, 3);
    const PppRealization b = SampleRealization(sys, 500.0, 7, 3);
    REQUIRE(a.sbs.size() == b.sbs.size());
    REQUIRE(a.mbs.size() == b.mbs.size());
    for (std::size_t i = 0; i < a.sbs.size(); ++i)
    {
        CHECK(a.sbs[i].x == b.sbs[i].x);
        CHECK(a.sbs[i].fading == b.sbs[i].fading);
        CHECK(a.sbs[i].path == b.sbs[i].path);
    }
    const PppRealization c = SampleRealization(sys, 500.0, 7, 4);
    CHECK((c.sbs.size() != a.sbs.size() || c.sbs.front().x != a.sbs.front().x));
}

TEST_CASE("simulation is independent of the thread count")
{
    const SystemParams sys(SystemSettings{});
    const CacheParams cache(CacheSettings{});
    SimulationOptions opts;
    opts.realizations = 300;
    opts.r_sim = 800.0;
    opts.seed = 11;
    setenv("MABHET_THREADS", "1", 1);
    const SampleSet one = Simulate(sys, cache, opts);
    setenv("MABHET_THREADS", "5", 1);
    const SampleSet five = Simulate(sys, cache, opts);
    unsetenv("MABHET_THREADS");
    CHECK(SameSamples(one, five));
    opts.importance = {200.0, 400.0, 1.0};
    CHECK(SameSamples(Simulate(sys, cache, opts), Simulate(sys, cache, opts)));
}

TEST_CASE("point counts follow the intensities")
{
    const SystemParams sys(SystemSettings{});
    const double r_sim = 3000.0;
    const double area = std::numbers::pi * r_sim * r_sim;
    const int n = 1000;
    double sbs = 0.0;
    double mbs = 0.0;
    double inner = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const PppRealization p = SampleRealization(sys, r_sim, 99, i);
        sbs += p.sbs.size();
        mbs += p.mbs.size();
        for (const BaseStation& b : p.sbs)
        {
            CHECK_FALSE(b.distance > r_sim);
            inner += b.distance < r_sim / 2.0 ? 1.0 : 0.0;
        }
    }
    const double mean_s = 1e-4 * area;
    const double mean_m = 1e-5 * area;
    CHECK(std::abs(sbs / n - mean_s) < 3.0 * std::sqrt(mean_s / n));
    CHECK(std::abs(mbs / n - mean_m) < 3.0 * std::sqrt(mean_m / n));
    CHECK(std::abs(inner / sbs - 0.25) < 3.0 * std::sqrt(0.25 * 0.75 / sbs));
}

TEST_CASE("blockage and fading marks")
{
    const SystemParams sys(SystemSettings{});
    double los = 0.0;
    double count = 0.0;
    double fading = 0.0;
    double fading_n = 0.0;
    for (int i = 0; i < 200; ++i)
    {
        const PppRealization p = SampleRealization(sys, 3000.0, 5, i);
        for (const BaseStation& b : p.sbs)
        {
            if (b.distance > 95.0 && b.distance < 105.0)
            {
                los += b.path == Path::kLos ? 1.0 : 0.0;
                count += 1.0;
            }
            if (b.distance < 18.0)
            {
                CHECK(b.path == Path::kLos);
            }
            fading += b.fading;
            fading_n += 1.0;
        }
    }
    const double p = LosProbability(sys, 100.0);
    CHECK(std::abs(los / count - p) < 4.0 * std::sqrt(p * (1.0 - p) / count));
    CHECK(std::abs(fading / fading_n - 1.0) < 4.0 / std::sqrt(fading_n));
}

TEST_CASE("LoS tail beyond the disc")
{
    const SystemParams sys(SystemSettings{});
    const double r_sim = 3000.0;
    const double r_tail = 1e5;
    // 2 pi lambda int P_L(x) x dx over the annulus; the e^{-beta x} part is below 1e-30.
    const double expected_s = 2.0 * std::numbers::pi * 1e-4 * 18.0 * (r_tail - r_sim);
    const int n = 500;
    double tail = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const PppRealization p = SampleRealization(sys, r_sim, 17, i, r_tail);
        for (const BaseStation& b : p.sbs)
        {
            if (b.distance > r_sim)
            {
                CHECK(b.path == Path::kLos);
                CHECK_FALSE(b.distance > r_tail);
                tail += 1.0;
            }
        }
    }
    CHECK(std::abs(tail / n - expected_s) < 3.0 * std::sqrt(expected_s / n));

    // Without the tail, a 3 km disc often holds no LoS macro cell and the
    // backhaul falls back to NLoS, which the infinite network never does.
    SimulationOptions opts;
    opts.realizations = 2000;
    opts.seed = 8;
    opts.los_tail_radius = 0.0;
    const CacheParams cache(CacheSettings{});
    const double disc_only = AssociationFractions(Simulate(sys, cache, opts)).backhaul[1].estimate;
    opts.los_tail_radius = r_tail;
    const double with_tail = AssociationFractions(Simulate(sys, cache, opts)).backhaul[1].estimate;
    CHECK(disc_only > 0.01);
    CHECK(with_tail < 1e-3);

    SystemSettings flat;
    flat.beta = 0.0;
    opts.los_tail_radius = 1e6;
    CHECK_THROWS_AS(Simulate(SystemParams(flat), cache, opts), InvalidParameter);
}

TEST_CASE("an empty tier")
{
    SystemSettings s;
    s.lambda_m = 0.0;
    const PppRealization p = SampleRealization(SystemParams(s), 1000.0, 1, 0);
    CHECK(p.mbs.empty());
    CHECK_FALSE(p.sbs.empty());
}

TEST_CASE("single realization has no standard error")
{
    const SystemParams sys(SystemSettings{});
    const CacheParams cache(CacheSettings{});
    SimulationOptions opts;
    opts.realizations = 1;
    opts.r_sim = 500.0;
    const SampleSet s = Simulate(sys, cache, opts);
    const McAssociation a = AssociationFractions(s);
    CHECK_FALSE(a.user[0].std_error.has_value());
    CHECK(a.user[0].n == 1);
}

TEST_CASE("sample set invariants")
{
    const SystemParams sys(SystemSettings{});
    const CacheParams cache(CacheSettings{});
    SimulationOptions opts;
    opts.realizations = 2000;
    opts.r_sim = 1500.0;
    opts.seed = 3;
    const SampleSet s = Simulate(sys, cache, opts);
    CHECK(s.noise == NoisePower(sys));
    CHECK(s.access_weight.empty());

    const McAssociation a = AssociationFractions(s);
    double user = 0.0;
    for (const McEstimate& e : a.user)
    {
        user += e.estimate;
    }
    CHECK(user == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.backhaul[0].estimate + a.backhaul[1].estimate == doctest::Approx(1.0).epsilon(1e-12));

    // A vanishing threshold is cleared by every served receiver.
    const double tiny[] = {1e-30};
    const McCoverage cov = CoverageEstimates(s, tiny)[0];
    for (std::size_t i = 0; i < 4; ++i)
    {
        CHECK(cov.access[i].estimate == a.user[i].estimate);
    }

    for (const LinkOutcome& o : s.access)
    {
        CHECK(o.ConditionalSuccess(2.0, s.noise) ==
              doctest::Approx(std::exp(-2.0 * (o.interference + s.noise) / o.mean_signal)).epsilon(1e-14));
    }
}

TEST_CASE("throughput composition limits")
{
    const SystemParams sys(SystemSettings{});
    const CacheParams cache(CacheSettings{});
    SimulationOptions opts;
    opts.realizations = 2000;
    opts.r_sim = 1500.0;
    const SampleSet s = Simulate(sys, cache, opts);
    const double g = 1.0;
    CHECK(AptEstimate(sys, s, 0.37, 0.0, g).r_total.estimate == 0.0);

    const McAptBreakdown full = AptEstimate(sys, s, 1.0, 0.6, g);
    const double gammas[] = {g};
    const McCoverage cov = CoverageEstimates(s, gammas)[0];
    const double sbs_cov = cov.access[0].estimate + cov.access[1].estimate;
    const double mbs_cov = cov.access[2].estimate + cov.access[3].estimate;
    // Every access term enters two of the four cases, one per backhaul path.
    CHECK(full.sbs_case[0].estimate == doctest::Approx(1e-4 * 0.6 * 400e6 * cov.access[0].estimate).epsilon(1e-12));
    CHECK(full.sbs_case[3].estimate == doctest::Approx(1e-4 * 0.6 * 400e6 * cov.access[1].estimate).epsilon(1e-12));
    CHECK(full.r_sbs.estimate == doctest::Approx(2.0 * 1e-4 * 0.6 * 400e6 * sbs_cov).epsilon(1e-12));
    CHECK(full.r_mbs.estimate == doctest::Approx(1e-5 * 0.6 * 400e6 * mbs_cov).epsilon(1e-12));
}

TEST_CASE("Laplace estimator limits")
{
    const SystemParams sys(SystemSettings{});
    const CacheParams cache(CacheSettings{});
    LaplaceOptions opts;
    opts.accepted = 200;
    opts.r_sim = 1000.0;
    const McEstimate zero = McLaplace(sys, cache, kSbsLos, 30.0, 0.0, opts);
    CHECK(zero.estimate == 1.0);
    CHECK(zero.n == 200);
    // An NLoS macro link at 2 km almost never wins the association.
    CHECK_THROWS_AS(McLaplace(sys, cache, kMbsNlos, 2000.0, 1e10, opts), RejectionStarvation);
}

TEST_CASE("importance sampling keeps the estimators unbiased")
{
    const SystemParams sys(SystemSettings{});
    const CacheParams cache(CacheSettings{});
    SimulationOptions plain;
    plain.realizations = 20000;
    plain.r_sim = 1500.0;
    plain.seed = 21;
    SimulationOptions boosted = plain;
    boosted.seed = 22;
    boosted.importance = {5.0, 10.0, 0.5};

    const double gammas[] = {1.0};
    const McCoverage a = McCoverageRun(sys, cache, gammas, plain)[0];
    const SampleSet bs = Simulate(sys, cache, boosted);
    const McCoverage b = CoverageEstimates(bs, gammas)[0];

    double w = 0.0;
    double w2 = 0.0;
    for (double v : bs.access_weight)
    {
        w += v;
        w2 += v * v;
    }
    const double n = static_cast<double>(bs.access_weight.size());
    CHECK(std::abs(w / n - 1.0) < 4.0 * std::sqrt((w2 / n - (w / n) * (w / n)) / n));

    for (std::size_t i : {0u, 2u})
    {
        const double se = std::hypot(a.access[i].std_error.value(), b.access[i].std_error.value());
        CHECK(std::abs(a.access[i].estimate - b.access[i].estimate) < 4.0 * se);
    }
}

TEST_CASE("simulation disc is large enough")
{
    const SystemParams sys(SystemSettings{});
    const CacheParams cache(CacheSettings{});
    SimulationOptions small;
    small.realizations = 20000;
    small.r_sim = 1500.0;
    small.seed = 31;
    SimulationOptions large = small;
    large.r_sim = 3000.0;
    large.seed = 32;
    const double gammas[] = {0.1};
    const McCoverage a = McCoverageRun(sys, cache, gammas, small, Estimator::kConditional)[0];
    const McCoverage b = McCoverageRun(sys, cache, gammas, large, Estimator::kConditional)[0];
    for (std::size_t i : {0u, 2u})
    {
        const double se = std::hypot(a.access[i].std_error.value(), b.access[i].std_error.value());
        CHECK(std::abs(a.access[i].estimate - b.access[i].estimate) < 4.0 * se);
    }
    const CoverageResult exact = ComputeCoverage(sys, cache, 0.1);
    CHECK(Z(b.access[0], exact.access[0]) < 4.0);
    CHECK(Z(b.access[2], exact.access[2]) < 4.0);
}
