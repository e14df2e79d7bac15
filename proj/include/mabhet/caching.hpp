#pragma once

#include "mabhet/params.hpp"

#include <span>
#include <vector>

namespace mabhet {

/// Zipf request probabilities p_f, f = 1..F, for a library of F files.
class PopularityProfile
{
  public:
    explicit PopularityProfile(const CacheParams& cache);

    int library_size() const noexcept { return static_cast<int>(p_.size()); }
    /// Sum over g of g^-gamma.
    double normalizer() const noexcept { return normalizer_; }
    /// Probability of file f (1-based). Throws IndexOutOfLibrary.
    double operator()(int f) const;
    std::span<const double> probabilities() const noexcept { return p_; }
    /// Total probability of the `c` most popular files.
    double HeadMass(int c) const;

  private:
    std::vector<double> p_;
    std::vector<double> head_; ///< head_[c] = sum of first c weights (unnormalized)
    double normalizer_;
};

double ZipfPopularity(const CacheParams& cache, int f);

/// Hit ratio of an SBS storing the C most popular files.
double CacheHitRatio(const CacheParams& cache);

} // namespace mabhet
