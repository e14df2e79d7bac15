#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mabhet/params.hpp"

#include <cmath>

using namespace mabhet;

namespace {

SystemParams
Defaults()
{
    return SystemParams(SystemSettings{});
}

} // namespace

TEST_CASE("sbs transmit power at the default budget")
{
    const SystemParams sys = Defaults();
    CHECK(SbsTxPower(sys, CacheParams(CacheSettings{}).WithCacheSize(0)) == doctest::Approx((9.1 - 0.1) / 4.0));
    CHECK(SbsTxPower(sys, CacheParams(CacheSettings{})) == doctest::Approx((9.1 - 0.1 - 8.0) / 4.0));
    CHECK(SbsTxPower(sys, CacheParams(CacheSettings{})) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("sbs transmit power is affine and strictly decreasing in C")
{
    const SystemParams sys = Defaults();
    const CacheParams cache(CacheSettings{});
    const double slope = -cache->w_ca * cache->file_size_bits / sys->rho_s;
    double prev = SbsTxPower(sys, cache.WithCacheSize(0));
    for (int c = 1; c <= MaxFeasibleCacheSize(sys, cache); ++c)
    {
        const double p = SbsTxPower(sys, cache.WithCacheSize(c));
        CHECK(p < prev);
        CHECK(p - prev == doctest::Approx(slope).epsilon(1e-9));
        prev = p;
    }
}

TEST_CASE("cache power exhausting the sbs budget is rejected")
{
    const SystemParams sys = Defaults();
    const CacheParams cache(CacheSettings{});
    // 113 files need 9.04 W of the 9.0 W left after circuit power.
    CHECK(MaxFeasibleCacheSize(sys, cache) == 112);
    CHECK_THROWS_AS(SbsTxPower(sys, cache.WithCacheSize(113)), NonPositiveTxPower);
    CHECK(MaxFeasibleCacheSize(sys, CacheParams::FourMegabitProfile()) == 899);
    CHECK_THROWS_AS(SbsTxPower(sys, CacheParams::FourMegabitProfile(900)), NonPositiveTxPower);
}

TEST_CASE("mbs transmit power")
{
    const SystemParams sys = Defaults();
    CacheSettings cs;
    CHECK(MbsTxPower(sys, CacheParams(cs)) == doctest::Approx((610.0 - 10.16 - 80.0) / 15.13).epsilon(1e-12));
    CHECK(MbsTxPower(sys, CacheParams(cs)) == doctest::Approx(34.35822868473232).epsilon(1e-12));
    for (int c : {0, 50, 112})
    {
        CHECK(MbsTxPower(sys, CacheParams(cs).WithCacheSize(c)) == MbsTxPower(sys, CacheParams(cs)));
    }
    cs.w_ca = 0.0;
    CHECK(MbsTxPower(sys, CacheParams(cs)) == doctest::Approx(39.64573694646398).epsilon(1e-12));
    cs.w_ca = 2.5e-9;
    cs.library_size = 7498; // 7498 x 0.08 W = 599.84 W
    cs.cache_size = 0;
    CHECK_THROWS_AS(MbsTxPower(sys, CacheParams(cs)), NonPositiveTxPower);
}

TEST_CASE("noise power")
{
    SystemSettings s;
    s.noise = ConstantWatts{3.162e-13};
    CHECK(NoisePower(SystemParams(s)) == 3.162e-13);

    s.noise = ThermalPlusNoiseFigure{0.0};
    s.total_bandwidth_hz = 1.0;
    CHECK(NoisePower(SystemParams(s)) == doctest::Approx(1e-3 * std::pow(10.0, -17.4)).epsilon(1e-12));

    s = SystemSettings{};
    const double expected = 1e-3 * std::pow(10.0, (-174.0 + 10.0 * std::log10(4e8) + 5.0) / 10.0);
    CHECK(NoisePower(SystemParams(s)) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(NoisePower(SystemParams(s)) == doctest::Approx(5.035701647176666e-12).epsilon(1e-10));
}

TEST_CASE("invalid parameters fail loudly and name the field")
{
    auto field_of = [](auto&& make) {
        try
        {
            make();
        }
        catch (const InvalidParameter& e)
        {
            return e.field();
        }
        return std::string("<none>");
    };
    CHECK(field_of([] { SpectrumPartition{1.5}; }) == "partition.eta");
    CHECK(field_of([] { SpectrumPartition{-0.1}; }) == "partition.eta");
    CHECK(field_of([] {
              SystemSettings s;
              s.p_fc_s = 9.1;
              SystemParams{s};
          }) == "system.p_fc_s");
    CHECK(field_of([] {
              SystemSettings s;
              s.p_fc_m = 700.0;
              SystemParams{s};
          }) == "system.p_fc_m");
    CHECK(field_of([] {
              SystemSettings s;
              s.alpha_los = 0.0;
              SystemParams{s};
          }) == "system.alpha_los");
    CHECK(field_of([] {
              SystemSettings s;
              s.bias_s = -1.0;
              SystemParams{s};
          }) == "system.bias_s");
    CHECK(field_of([] {
              SystemSettings s;
              s.lambda_m = 0.0;
              s.lambda_s = 0.0;
              SystemParams{s};
          }) == "system.lambda_s");
    CHECK(field_of([] {
              CacheSettings c;
              c.cache_size = 1001;
              CacheParams{c};
          }) == "cache.cache_size");
    CHECK(field_of([] {
              CacheSettings c;
              c.cache_size = -1;
              CacheParams{c};
          }) == "cache.cache_size");
    CHECK(field_of([] {
              CacheSettings c;
              c.zipf_exponent = 0.0;
              CacheParams{c};
          }) == "cache.zipf_exponent");
    CHECK(field_of([] {
              CacheSettings c;
              c.library_size = 0;
              c.cache_size = 0;
              CacheParams{c};
          }) == "cache.library_size");
    CHECK(field_of([] {
              SystemSettings s;
              s.noise = ConstantWatts{0.0};
              SystemParams{s};
          }) == "system.noise.watts");
}

TEST_CASE("single tier may be switched off")
{
    SystemSettings s;
    s.lambda_s = 0.0;
    CHECK_NOTHROW(SystemParams{s});
}

TEST_CASE("spectrum partition always sums to the band")
{
    for (double eta : {0.0, 0.1, 0.37, 0.5, 0.999, 1.0})
    {
        const SpectrumPartition p(eta);
        CHECK(p.AccessBandwidth(4e8) + p.BackhaulBandwidth(4e8) == 4e8);
    }
    CHECK(SpectrumPartition(0.0).AccessBandwidth(4e8) == 0.0);
    CHECK(SpectrumPartition(1.0).BackhaulBandwidth(4e8) == 0.0);
}

TEST_CASE("exactly four link classes")
{
    CHECK(kAllLinkClasses.size() == 4);
    for (std::size_t i = 0; i < kAllLinkClasses.size(); ++i)
    {
        CHECK(Index(kAllLinkClasses[i]) == i);
        for (std::size_t j = i + 1; j < kAllLinkClasses.size(); ++j)
        {
            CHECK_FALSE(kAllLinkClasses[i] == kAllLinkClasses[j]);
        }
    }
    CHECK(ToString(LinkClass{Tier::kMbs, Path::kNlos}) == "mbs_nlos");
}

TEST_CASE("dB conversions")
{
    CHECK(DbToLinear(10.0) == doctest::Approx(10.0));
    CHECK(DbToLinear(0.0) == 1.0);
    CHECK(LinearToDb(100.0) == doctest::Approx(20.0));
    CHECK(LinearToDb(DbToLinear(7.3)) == doctest::Approx(7.3));
}

TEST_CASE("link model strength")
{
    const SystemParams sys = Defaults();
    const CacheParams cache(CacheSettings{});
    const LinkModel m = LinkModel::Build(sys, cache);
    CHECK(m.Strength({Tier::kSbs, Path::kLos}) == doctest::Approx(0.25 * 10.0 * std::pow(10.0, -10.38)));
    CHECK(m.Strength({Tier::kMbs, Path::kNlos}) ==
          doctest::Approx(MbsTxPower(sys, cache) * 1.0 * std::pow(10.0, -14.54)));
    CHECK(m.noise == NoisePower(sys));
}
