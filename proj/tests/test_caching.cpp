#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mabhet/caching.hpp"

#include <cmath>

using namespace mabhet;

namespace {

CacheParams
Library(int f, double gamma_p, int c = 0)
{
    CacheSettings s;
    s.library_size = f;
    s.zipf_exponent = gamma_p;
    s.cache_size = c;
    return CacheParams(s);
}

/// Plain long-double partial sums, independent of the compensated profile.
long double
DirectHitRatio(int c, int f, double gamma_p)
{
    long double head = 0.0L;
    long double total = 0.0L;
    for (int g = f; g >= 1; --g)
    {
        const long double w = std::pow(static_cast<long double>(g), -static_cast<long double>(gamma_p));
        total += w;
        if (g <= c)
        {
            head += w;
        }
    }
    return head / total;
}

} // namespace

TEST_CASE("single file library")
{
    for (double g : {0.1, 0.6, 2.0})
    {
        CHECK(ZipfPopularity(Library(1, g), 1) == 1.0);
    }
}

TEST_CASE("two file library")
{
    CHECK(ZipfPopularity(Library(2, 1.0), 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(ZipfPopularity(Library(2, 1.0), 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("popularity is strictly decreasing and normalized")
{
    const PopularityProfile p(Library(1000, 0.6));
    double sum = 0.0;
    for (int f = 1; f <= 1000; ++f)
    {
        if (f > 1)
        {
            CHECK(p(f) < p(f - 1));
        }
        CHECK(p(f) > 0.0);
        CHECK(p(f) <= 1.0);
        sum += p(f);
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
}

TEST_CASE("file index outside the library")
{
    const CacheParams lib = Library(10, 0.6);
    CHECK_THROWS_AS(ZipfPopularity(lib, 0), IndexOutOfLibrary);
    CHECK_THROWS_AS(ZipfPopularity(lib, 11), IndexOutOfLibrary);
    CHECK_NOTHROW(ZipfPopularity(lib, 10));
}

TEST_CASE("hit ratio end points are exact")
{
    CHECK(CacheHitRatio(Library(1000, 0.6, 0)) == 0.0);
    CHECK(CacheHitRatio(Library(1000, 0.6, 1000)) == 1.0);
    CHECK(CacheHitRatio(Library(7, 1.3, 7)) == 1.0);
}

TEST_CASE("hit ratio at the default cache")
{
    const double p = CacheHitRatio(Library(1000, 0.6, 100));
    CHECK(p == doctest::Approx(static_cast<double>(DirectHitRatio(100, 1000, 0.6))).epsilon(1e-13));
    // 50-digit partial sums
    CHECK(p == doctest::Approx(0.367666502408620105).epsilon(1e-13));
}

TEST_CASE("hit ratio is strictly increasing and concave in C")
{
    const PopularityProfile p(Library(1000, 0.6));
    double prev_gain = 1.0;
    for (int c = 1; c <= 1000; ++c)
    {
        const double gain = p.HeadMass(c) - p.HeadMass(c - 1);
        CHECK(gain > 0.0);
        CHECK(gain <= prev_gain + 1e-15);
        prev_gain = gain;
    }
}

TEST_CASE("more skew never lowers the hit ratio")
{
    for (int c : {1, 10, 100, 500, 999})
    {
        double prev = 0.0;
        for (double g : {0.3, 0.5, 0.6, 0.8, 1.0, 1.5})
        {
            const double h = CacheHitRatio(Library(1000, g, c));
            CHECK(h >= prev);
            prev = h;
        }
    }
}

TEST_CASE("profile matches direct sums across parameters")
{
    for (double g : {0.5, 0.6, 1.0})
    {
        for (int c : {0, 1, 37, 250, 999})
        {
            CHECK(CacheHitRatio(Library(1000, g, c)) ==
                  doctest::Approx(static_cast<double>(DirectHitRatio(c, 1000, g))).epsilon(1e-13));
        }
    }
}
