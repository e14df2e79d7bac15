#pragma once

#include "mabhet/params.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace mabhet::mc {

/// Per-realization random streams are derived from (seed, stream id) only, so
/// replay is bit-identical whatever the thread count.
std::uint64_t DeriveStreamSeed(std::uint64_t seed, std::uint64_t stream) noexcept;

struct BaseStation
{
    double x;
    double y;
    double distance; ///< to the receiver at the origin
    Path path;       ///< blockage state of the link to the receiver
    double fading;   ///< unit-mean exponential power gain
};

/// One network snapshot seen from a receiver at the origin.
struct PppRealization
{
    std::vector<BaseStation> mbs;
    std::vector<BaseStation> sbs;
    std::uint64_t seed = 0;
    std::uint64_t substream = 0;
};

/// Uniform PPPs of both tiers in a disc of radius r_sim around the origin,
/// plus the LoS points of the annulus out to los_tail_radius when that is larger.
PppRealization SampleRealization(const SystemParams& sys, double r_sim, std::uint64_t seed,
                                 std::uint64_t substream, double los_tail_radius = 0.0);

struct McEstimate
{
    double estimate = 0.0;
    /// Undefined (nullopt) for fewer than two samples.
    std::optional<double> std_error;
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

/// Outcome of one receiver: serving class and the SINR ingredients.
struct LinkOutcome
{
    bool served = false;
    LinkClass serving{Tier::kSbs, Path::kLos};
    double distance = 0.0;
    double mean_signal = 0.0;  ///< P B A r^-alpha of the serving BS [W]
    double fading = 0.0;       ///< serving-link fading draw
    double interference = 0.0; ///< sum over all other BSs, with fading [W]

    double Sinr(double noise) const noexcept { return mean_signal * fading / (interference + noise); }
    /// P[SINR >= gamma | everything but the serving fading] = exp(-gamma (I + N0) / S).
    double ConditionalSuccess(double gamma, double noise) const noexcept;
};

/// Per-realization data behind every simulation estimate.
struct SampleSet
{
    std::vector<LinkOutcome> access;   ///< typical user at the origin
    std::vector<LinkOutcome> backhaul; ///< independent typical SBS at the origin
    std::vector<double> miss_draw;     ///< uniform; a request misses the cache when draw < 1 - p_h
    /// Likelihood ratios when importance sampling is on, otherwise empty (all 1).
    std::vector<double> access_weight;
    std::vector<double> backhaul_weight;
    double noise = 0.0;
    double r_sim = 0.0;
    std::uint64_t seed = 0;
    std::size_t empty_access = 0;   ///< realizations without any BS in the disc
    std::size_t empty_backhaul = 0;
};

/// Optional change of measure: inside a disc of the given radius around the
/// receiver, a tier is drawn with intensity raised to give `target_mean`
/// expected points, and every realization carries the exact Poisson likelihood
/// ratio. A radius of 0 leaves the tier untouched.
struct ImportanceSampling
{
    double sbs_radius = 0.0;
    double mbs_radius = 0.0;
    double target_mean = 1.0;

    bool enabled() const noexcept { return sbs_radius > 0.0 || mbs_radius > 0.0; }
};

struct SimulationOptions
{
    std::size_t realizations = 20000;
    double r_sim = 3000.0;
    std::uint64_t seed = 1;
    ImportanceSampling importance{};
    /// LoS base stations are also drawn in the annulus [r_sim, los_tail_radius].
    /// LoS probability decays only like 18/r, so a disc of a few km misses
    /// LoS interferers and LoS backhaul candidates that still matter.
    double los_tail_radius = 1e5;
};

/// Simulates `realizations` independent access and backhaul snapshots.
SampleSet Simulate(const SystemParams& sys, const CacheParams& cache, const SimulationOptions& opts);

/// How coverage is scored per realization.
enum class Estimator
{
    kIndicator,   ///< 1{SINR >= gamma} with the drawn serving fading
    kConditional, ///< exp(-gamma (I + N0) / S): serving fading integrated out
};

struct McCoverage
{
    double gamma = 0.0;
    std::array<McEstimate, 4> access;   ///< indexed like kAllLinkClasses
    std::array<McEstimate, 2> backhaul; ///< by Path index
};

struct McAssociation
{
    std::array<McEstimate, 4> user;
    std::array<McEstimate, 2> backhaul;
    std::size_t empty = 0;
};

McAssociation AssociationFractions(const SampleSet& samples);
std::vector<McCoverage> CoverageEstimates(const SampleSet& samples, std::span<const double> gammas,
                                          Estimator estimator = Estimator::kIndicator);

/// Simulate + CoverageEstimates.
std::vector<McCoverage> McCoverageRun(const SystemParams& sys, const CacheParams& cache,
                                      std::span<const double> gammas, const SimulationOptions& opts,
                                      Estimator estimator = Estimator::kIndicator);

struct McAptBreakdown
{
    McEstimate r_total;
    McEstimate r_sbs;
    McEstimate r_mbs;
    std::array<McEstimate, 4> sbs_case; ///< ll, ln, nl, nn
    double miss_fraction = 0.0;         ///< empirical cache-miss rate of SBS-served requests
};

/// Flow-level throughput estimate from a sample set. Standard errors come from
/// 20 contiguous batches.
McAptBreakdown AptEstimate(const SystemParams& sys, const SampleSet& samples, double hit_ratio, double eta,
                           double gamma0, Estimator estimator = Estimator::kIndicator);

McAptBreakdown McApt(const SystemParams& sys, const CacheParams& cache, double eta, double gamma0,
                     const SimulationOptions& opts, Estimator estimator = Estimator::kIndicator);

struct LaplaceOptions
{
    std::size_t accepted = 20000;
    double r_sim = 3000.0;
    std::uint64_t seed = 1;
    /// Give up when fewer than this fraction of candidates satisfy the association event.
    double min_acceptance = 1e-4;
    double los_tail_radius = 1e5;
};

/// E[exp(-s I)] for a user whose serving BS of class `desired` sits at r,
/// by rejection on the association event.
McEstimate McLaplace(const SystemParams& sys, const CacheParams& cache, LinkClass desired, double r, double s,
                     const LaplaceOptions& opts);
/// Same for an SBS backhauled by an MBS over `desired` at r.
McEstimate McBackhaulLaplace(const SystemParams& sys, const CacheParams& cache, Path desired, double r, double s,
                             const LaplaceOptions& opts);

} // namespace mabhet::mc
