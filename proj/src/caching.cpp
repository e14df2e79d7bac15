#include "mabhet/caching.hpp"

#include <cmath>
#include <string>

namespace mabhet {

namespace {

// Neumaier-compensated running sum.
class CompensatedSum
{
  public:
    void Add(double x) noexcept
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
        {
            c_ += (sum_ - t) + x;
        }
        else
        {
            c_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + c_; }

  private:
    double sum_ = 0.0;
    double c_ = 0.0;
};

} // namespace

PopularityProfile::PopularityProfile(const CacheParams& cache)
{
    const int f_max = cache->library_size;
    const double gamma = cache->zipf_exponent;
    std::vector<double> w(f_max);
    head_.assign(f_max + 1, 0.0);
    CompensatedSum acc;
    for (int f = 1; f <= f_max; ++f)
    {
        w[f - 1] = std::pow(static_cast<double>(f), -gamma);
        acc.Add(w[f - 1]);
        head_[f] = acc.value();
    }
    normalizer_ = head_[f_max];
    p_.resize(f_max);
    for (int f = 0; f < f_max; ++f)
    {
        p_[f] = w[f] / normalizer_;
    }
}

double
PopularityProfile::operator()(int f) const
{
    if (f < 1 || f > library_size())
    {
        throw IndexOutOfLibrary("file index " + std::to_string(f) + " outside [1, " +
                                std::to_string(library_size()) + "]");
    }
    return p_[f - 1];
}

double
PopularityProfile::HeadMass(int c) const
{
    if (c < 0 || c > library_size())
    {
        throw IndexOutOfLibrary("cache size " + std::to_string(c) + " outside [0, " +
                                std::to_string(library_size()) + "]");
    }
    if (c == library_size())
    {
        return 1.0;
    }
    return head_[c] / normalizer_;
}

double
ZipfPopularity(const CacheParams& cache, int f)
{
    return PopularityProfile(cache)(f);
}

double
CacheHitRatio(const CacheParams& cache)
{
    return PopularityProfile(cache).HeadMass(cache->cache_size);
}

} // namespace mabhet
