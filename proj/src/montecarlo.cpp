#include "mabhet/montecarlo.hpp"

#include "mabhet/parallel.hpp"
#include "mabhet/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace mabhet::mc {

namespace {

std::uint64_t
SplitMix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

using Engine = std::mt19937_64;

/// Draws `n` points uniform in the annulus [r_in, r_out]. Four draws per point,
/// in a fixed order: radius, angle, blockage, fading.
template <typename Keep>
void
DrawPoints(Engine& rng, long n, double r_in, double r_out, double beta, Keep& keep)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::exponential_distribution<double> fading(1.0);
    const double in2 = r_in * r_in;
    const double span = r_out * r_out - in2;
    for (long i = 0; i < n; ++i)
    {
        const double d = std::sqrt(in2 + span * unit(rng));
        const double angle = 2.0 * std::numbers::pi * unit(rng);
        const Path path = unit(rng) < detail::LosProbability(beta, d) ? Path::kLos : Path::kNlos;
        const double h = fading(rng);
        keep(d, angle, path, h);
    }
}

/// Draws one BS tier in the disc of radius r_sim.
template <typename Keep>
void
DrawTier(Engine& rng, double lambda, double r_sim, double beta, Keep&& keep)
{
    if (lambda <= 0.0)
    {
        return;
    }
    std::poisson_distribution<long> count(lambda * std::numbers::pi * r_sim * r_sim);
    DrawPoints(rng, count(rng), 0.0, r_sim, beta, keep);
}

/// Upper bound of x P_L(x) on [r_in, r_out] for r_out > r_in: 18 (1 - e^{-beta x}) + x e^{-beta x}.
double
TailEnvelope(double beta, double r_in, double r_out)
{
    if (beta <= 0.0)
    {
        return std::max(kLosRadius, r_out);
    }
    const double x = std::clamp(1.0 / beta, r_in, r_out);
    return kLosRadius + x * std::exp(-beta * x);
}

double
ExpectedTailCandidates(double lambda, double beta, double r_sim, double r_tail)
{
    if (lambda <= 0.0 || r_tail <= r_sim)
    {
        return 0.0;
    }
    return 2.0 * std::numbers::pi * lambda * TailEnvelope(beta, r_sim, r_tail) * (r_tail - r_sim);
}

/// LoS points of one tier in the annulus [r_sim, r_tail]. Their radial
/// intensity 2 pi lambda x P_L(x) is nearly flat, so they are drawn from the
/// flat envelope and thinned. Four draws per candidate: radius, angle,
/// acceptance, fading.
template <typename Keep>
void
DrawLosTail(Engine& rng, double lambda, double r_sim, double r_tail, double beta, Keep&& keep)
{
    if (lambda <= 0.0 || r_tail <= r_sim)
    {
        return;
    }
    const double envelope = TailEnvelope(beta, r_sim, r_tail);
    std::poisson_distribution<long> count(ExpectedTailCandidates(lambda, beta, r_sim, r_tail));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::exponential_distribution<double> fading(1.0);
    const long n = count(rng);
    for (long i = 0; i < n; ++i)
    {
        const double d = r_sim + (r_tail - r_sim) * unit(rng);
        const double angle = 2.0 * std::numbers::pi * unit(rng);
        const bool los = unit(rng) * envelope < d * detail::LosProbability(beta, d);
        const double h = fading(rng);
        if (los)
        {
            keep(d, angle, Path::kLos, h);
        }
    }
}

/// Same tier with the intensity inside `radius` raised so that the disc holds
/// `target` points on average. Returns the log likelihood ratio of the drawn
/// configuration (0 when the tier is left alone).
template <typename Keep>
double
DrawTierBoosted(Engine& rng, double lambda, double r_sim, double beta, double radius, double target, Keep&& keep)
{
    if (lambda <= 0.0)
    {
        return 0.0;
    }
    const double inner = std::min(radius, r_sim);
    const double area = std::numbers::pi * inner * inner;
    const double boosted = std::max(lambda, target / area);
    if (inner <= 0.0 || boosted == lambda)
    {
        DrawTier(rng, lambda, r_sim, beta, keep);
        return 0.0;
    }
    std::poisson_distribution<long> inside(boosted * area);
    const long n_in = inside(rng);
    DrawPoints(rng, n_in, 0.0, inner, beta, keep);
    std::poisson_distribution<long> outside(lambda * std::numbers::pi * (r_sim * r_sim - inner * inner));
    DrawPoints(rng, outside(rng), inner, r_sim, beta, keep);
    return (boosted - lambda) * area + static_cast<double>(n_in) * std::log(lambda / boosted);
}

struct Candidate
{
    LinkClass cls;
    double distance;
    double mean; ///< biased mean received power
    double fading;
};

/// Max-biased-power association over `bs` (SBS entries first so that ties go
/// to the SBS tier) and the literal interference sum.
LinkOutcome
Associate(const std::vector<Candidate>& bs)
{
    LinkOutcome out;
    if (bs.empty())
    {
        return out;
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < bs.size(); ++i)
    {
        if (bs[i].mean > bs[best].mean)
        {
            best = i;
        }
    }
    double interference = 0.0;
    for (std::size_t i = 0; i < bs.size(); ++i)
    {
        if (i != best)
        {
            interference += bs[i].mean * bs[i].fading;
        }
    }
    out.served = true;
    out.serving = bs[best].cls;
    out.distance = bs[best].distance;
    out.mean_signal = bs[best].mean;
    out.fading = bs[best].fading;
    out.interference = interference;
    return out;
}

double
MeanPower(const LinkModel& m, LinkClass c, double d)
{
    return m.Strength(c) * std::pow(d, -m.Exponent(c.path));
}

struct Moments
{
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t n = 0;

    void Add(double x) noexcept
    {
        sum += x;
        sum_sq += x * x;
        ++n;
    }

    McEstimate Finish(std::uint64_t seed) const
    {
        McEstimate e;
        e.n = n;
        e.seed = seed;
        if (n == 0)
        {
            return e;
        }
        e.estimate = sum / static_cast<double>(n);
        if (n >= 2)
        {
            const double var = std::max(0.0, (sum_sq - sum * e.estimate) / static_cast<double>(n - 1));
            e.std_error = std::sqrt(var / static_cast<double>(n));
        }
        return e;
    }
};

void
RequireRadius(double r_sim)
{
    if (!(r_sim > 0.0))
    {
        throw InvalidParameter("mc.r_sim", "simulation radius must be > 0");
    }
}

constexpr double kMaxTailCandidates = 1e7;

void
RequireTail(const SystemParams& sys, double r_sim, double r_tail)
{
    if (!(r_tail >= 0.0))
    {
        throw InvalidParameter("mc.los_tail_radius", "must be >= 0");
    }
    const double cost = ExpectedTailCandidates(sys->lambda_s, sys->beta, r_sim, r_tail) +
                        ExpectedTailCandidates(sys->lambda_m, sys->beta, r_sim, r_tail);
    if (cost > kMaxTailCandidates)
    {
        throw InvalidParameter("mc.los_tail_radius", "LoS tail needs about " + std::to_string(cost) +
                                                         " candidates per realization; lower it");
    }
}

} // namespace

std::uint64_t
DeriveStreamSeed(std::uint64_t seed, std::uint64_t stream) noexcept
{
    return SplitMix64(SplitMix64(seed) ^ SplitMix64(stream + 0x632be59bd9b4e019ULL));
}

double
LinkOutcome::ConditionalSuccess(double gamma, double noise) const noexcept
{
    return std::exp(-gamma * (interference + noise) / mean_signal);
}

PppRealization
SampleRealization(const SystemParams& sys, double r_sim, std::uint64_t seed, std::uint64_t substream,
                  double los_tail_radius)
{
    RequireRadius(r_sim);
    RequireTail(sys, r_sim, los_tail_radius);
    PppRealization out;
    out.seed = seed;
    out.substream = substream;
    Engine rng(DeriveStreamSeed(seed, substream));
    auto into = [](std::vector<BaseStation>& v) {
        return [&v](double d, double angle, Path path, double h) {
            v.push_back({d * std::cos(angle), d * std::sin(angle), d, path, h});
        };
    };
    DrawTier(rng, sys->lambda_m, r_sim, sys->beta, into(out.mbs));
    DrawLosTail(rng, sys->lambda_m, r_sim, los_tail_radius, sys->beta, into(out.mbs));
    DrawTier(rng, sys->lambda_s, r_sim, sys->beta, into(out.sbs));
    DrawLosTail(rng, sys->lambda_s, r_sim, los_tail_radius, sys->beta, into(out.sbs));
    return out;
}

SampleSet
Simulate(const SystemParams& sys, const CacheParams& cache, const SimulationOptions& opts)
{
    RequireRadius(opts.r_sim);
    RequireTail(sys, opts.r_sim, opts.los_tail_radius);
    if (opts.realizations < 1)
    {
        throw InvalidParameter("mc.realizations", "need at least one realization");
    }
    const LinkModel m = LinkModel::Build(sys, cache);
    const std::size_t n = opts.realizations;

    SampleSet out;
    out.noise = m.noise;
    out.r_sim = opts.r_sim;
    out.seed = opts.seed;
    out.access.resize(n);
    out.backhaul.resize(n);
    out.miss_draw.resize(n);

    const ImportanceSampling& is = opts.importance;
    if (is.enabled())
    {
        if (!(is.target_mean > 0.0) || is.sbs_radius < 0.0 || is.mbs_radius < 0.0)
        {
            throw InvalidParameter("mc.importance", "radii must be >= 0 and target_mean > 0");
        }
        out.access_weight.resize(n);
        out.backhaul_weight.resize(n);
    }

    ParallelFor(n, [&](std::size_t i) {
        thread_local std::vector<Candidate> bs;
        thread_local std::vector<Candidate> sbs;
        auto keep = [&m](std::vector<Candidate>& v, Tier tier) {
            return [&m, &v, tier](double d, double, Path path, double h) {
                const LinkClass c{tier, path};
                v.push_back({c, d, MeanPower(m, c, d), h});
            };
        };

        // Typical user: both tiers, stream 2i (same draws as SampleRealization
        // with the same tail when importance sampling is off).
        Engine rng(DeriveStreamSeed(opts.seed, 2 * i));
        bs.clear();
        sbs.clear();
        double log_w = DrawTierBoosted(rng, sys->lambda_m, opts.r_sim, m.beta, is.mbs_radius, is.target_mean,
                                       keep(bs, Tier::kMbs));
        DrawLosTail(rng, sys->lambda_m, opts.r_sim, opts.los_tail_radius, m.beta, keep(bs, Tier::kMbs));
        log_w += DrawTierBoosted(rng, sys->lambda_s, opts.r_sim, m.beta, is.sbs_radius, is.target_mean,
                                 keep(sbs, Tier::kSbs));
        DrawLosTail(rng, sys->lambda_s, opts.r_sim, opts.los_tail_radius, m.beta, keep(sbs, Tier::kSbs));
        // SBS candidates go in front so that exact ties resolve to the SBS tier.
        bs.insert(bs.begin(), sbs.begin(), sbs.end());
        out.access[i] = Associate(bs);
        out.miss_draw[i] = std::uniform_real_distribution<double>(0.0, 1.0)(rng);

        // Typical SBS: MBS tier only, stream 2i + 1.
        Engine bh_rng(DeriveStreamSeed(opts.seed, 2 * i + 1));
        bs.clear();
        const double bh_log_w = DrawTierBoosted(bh_rng, sys->lambda_m, opts.r_sim, m.beta, is.mbs_radius,
                                                is.target_mean, keep(bs, Tier::kMbs));
        DrawLosTail(bh_rng, sys->lambda_m, opts.r_sim, opts.los_tail_radius, m.beta, keep(bs, Tier::kMbs));
        out.backhaul[i] = Associate(bs);
        if (is.enabled())
        {
            out.access_weight[i] = std::exp(log_w);
            out.backhaul_weight[i] = std::exp(bh_log_w);
        }
    });

    for (std::size_t i = 0; i < n; ++i)
    {
        out.empty_access += out.access[i].served ? 0 : 1;
        out.empty_backhaul += out.backhaul[i].served ? 0 : 1;
    }
    return out;
}

namespace {

double
Weight(const std::vector<double>& w, std::size_t i) noexcept
{
    return w.empty() ? 1.0 : w[i];
}

} // namespace

McAssociation
AssociationFractions(const SampleSet& samples)
{
    std::array<Moments, 4> user;
    std::array<Moments, 2> bh;
    for (std::size_t i = 0; i < samples.access.size(); ++i)
    {
        const LinkOutcome& o = samples.access[i];
        if (!o.served)
        {
            continue;
        }
        const double w = Weight(samples.access_weight, i);
        for (LinkClass c : kAllLinkClasses)
        {
            user[Index(c)].Add(o.serving == c ? w : 0.0);
        }
    }
    for (std::size_t i = 0; i < samples.backhaul.size(); ++i)
    {
        const LinkOutcome& o = samples.backhaul[i];
        if (!o.served)
        {
            continue;
        }
        const double w = Weight(samples.backhaul_weight, i);
        for (Path p : {Path::kLos, Path::kNlos})
        {
            bh[Index(p)].Add(o.serving.path == p ? w : 0.0);
        }
    }
    McAssociation out;
    out.empty = samples.empty_access;
    for (std::size_t k = 0; k < 4; ++k)
    {
        out.user[k] = user[k].Finish(samples.seed);
    }
    for (std::size_t k = 0; k < 2; ++k)
    {
        out.backhaul[k] = bh[k].Finish(samples.seed);
    }
    return out;
}

namespace {

double
Score(const LinkOutcome& o, double gamma, double noise, Estimator estimator)
{
    if (estimator == Estimator::kConditional)
    {
        return o.ConditionalSuccess(gamma, noise);
    }
    return o.Sinr(noise) >= gamma ? 1.0 : 0.0;
}

} // namespace

std::vector<McCoverage>
CoverageEstimates(const SampleSet& samples, std::span<const double> gammas, Estimator estimator)
{
    std::vector<McCoverage> out;
    out.reserve(gammas.size());
    for (double gamma : gammas)
    {
        std::array<Moments, 4> access;
        std::array<Moments, 2> bh;
        for (std::size_t i = 0; i < samples.access.size(); ++i)
        {
            const LinkOutcome& o = samples.access[i];
            if (!o.served)
            {
                continue;
            }
            const double score = Weight(samples.access_weight, i) * Score(o, gamma, samples.noise, estimator);
            for (LinkClass c : kAllLinkClasses)
            {
                access[Index(c)].Add(o.serving == c ? score : 0.0);
            }
        }
        for (std::size_t i = 0; i < samples.backhaul.size(); ++i)
        {
            const LinkOutcome& o = samples.backhaul[i];
            if (!o.served)
            {
                continue;
            }
            const double score = Weight(samples.backhaul_weight, i) * Score(o, gamma, samples.noise, estimator);
            for (Path p : {Path::kLos, Path::kNlos})
            {
                bh[Index(p)].Add(o.serving.path == p ? score : 0.0);
            }
        }
        McCoverage cov;
        cov.gamma = gamma;
        for (std::size_t k = 0; k < 4; ++k)
        {
            cov.access[k] = access[k].Finish(samples.seed);
        }
        for (std::size_t k = 0; k < 2; ++k)
        {
            cov.backhaul[k] = bh[k].Finish(samples.seed);
        }
        out.push_back(cov);
    }
    return out;
}

std::vector<McCoverage>
McCoverageRun(const SystemParams& sys, const CacheParams& cache, std::span<const double> gammas,
              const SimulationOptions& opts, Estimator estimator)
{
    return CoverageEstimates(Simulate(sys, cache, opts), gammas, estimator);
}

namespace {

struct AptPoint
{
    double r_total;
    double r_sbs;
    double r_mbs;
    std::array<double, 4> sbs_case;
    double miss_fraction;
};

/// Flow-level composition over realizations [begin, end).
AptPoint
ComposeRange(const SystemParams& sys, const SampleSet& s, std::size_t begin, std::size_t end, double hit_ratio,
             double eta, double gamma0, Estimator estimator)
{
    std::array<double, 4> access{};
    std::array<double, 2> bh{};
    std::size_t n_access = 0;
    std::size_t n_bh = 0;
    std::size_t sbs_served = 0;
    std::size_t misses = 0;
    for (std::size_t i = begin; i < end; ++i)
    {
        const LinkOutcome& a = s.access[i];
        if (a.served)
        {
            ++n_access;
            access[Index(a.serving)] += Weight(s.access_weight, i) * Score(a, gamma0, s.noise, estimator);
            if (a.serving.tier == Tier::kSbs)
            {
                ++sbs_served;
                misses += s.miss_draw[i] < 1.0 - hit_ratio ? 1 : 0;
            }
        }
        const LinkOutcome& b = s.backhaul[i];
        if (b.served)
        {
            ++n_bh;
            bh[Index(b.serving.path)] += Weight(s.backhaul_weight, i) * Score(b, gamma0, s.noise, estimator);
        }
    }
    for (double& v : access)
    {
        v = n_access > 0 ? v / static_cast<double>(n_access) : 0.0;
    }
    for (double& v : bh)
    {
        v = n_bh > 0 ? v / static_cast<double>(n_bh) : 0.0;
    }

    const double w = sys->total_bandwidth_hz;
    const double spectral = std::log2(1.0 + gamma0);
    const double access_rate = sys->lambda_s * eta * w * spectral;
    AptPoint p{};
    p.miss_fraction = sbs_served > 0 ? static_cast<double>(misses) / static_cast<double>(sbs_served) : 0.0;
    // No sampled miss: the backhaul never carries SBS traffic.
    const bool unconstrained = hit_ratio >= 1.0 - 1e-12 || misses == 0;
    const double backhaul_rate = unconstrained ? 0.0 : sys->lambda_m * (1.0 - eta) * w * spectral / p.miss_fraction;
    const std::array<std::array<std::size_t, 2>, 4> cases{{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
    for (std::size_t k = 0; k < 4; ++k)
    {
        const double a = access_rate * access[cases[k][0]];
        p.sbs_case[k] = unconstrained ? a : std::min(a, backhaul_rate * bh[cases[k][1]]);
        p.r_sbs += p.sbs_case[k];
    }
    p.r_mbs = sys->lambda_m * eta * w * spectral * (access[2] + access[3]);
    p.r_total = p.r_sbs + p.r_mbs;
    return p;
}

} // namespace

McAptBreakdown
AptEstimate(const SystemParams& sys, const SampleSet& samples, double hit_ratio, double eta, double gamma0,
            Estimator estimator)
{
    SpectrumPartition{eta};
    const std::size_t n = samples.access.size();
    const AptPoint all = ComposeRange(sys, samples, 0, n, hit_ratio, eta, gamma0, estimator);

    constexpr std::size_t kBatches = 20;
    std::array<Moments, 7> batch; // total, sbs, mbs, four cases
    if (n >= kBatches)
    {
        for (std::size_t b = 0; b < kBatches; ++b)
        {
            const AptPoint p = ComposeRange(sys, samples, b * n / kBatches, (b + 1) * n / kBatches, hit_ratio, eta,
                                            gamma0, estimator);
            batch[0].Add(p.r_total);
            batch[1].Add(p.r_sbs);
            batch[2].Add(p.r_mbs);
            for (std::size_t k = 0; k < 4; ++k)
            {
                batch[3 + k].Add(p.sbs_case[k]);
            }
        }
    }
    auto make = [&](double value, const Moments& m) {
        McEstimate e;
        e.estimate = value;
        e.n = n;
        e.seed = samples.seed;
        if (m.n >= 2)
        {
            e.std_error = m.Finish(samples.seed).std_error;
        }
        return e;
    };
    McAptBreakdown out;
    out.r_total = make(all.r_total, batch[0]);
    out.r_sbs = make(all.r_sbs, batch[1]);
    out.r_mbs = make(all.r_mbs, batch[2]);
    for (std::size_t k = 0; k < 4; ++k)
    {
        out.sbs_case[k] = make(all.sbs_case[k], batch[3 + k]);
    }
    out.miss_fraction = all.miss_fraction;
    return out;
}

McAptBreakdown
McApt(const SystemParams& sys, const CacheParams& cache, double eta, double gamma0, const SimulationOptions& opts,
      Estimator estimator)
{
    SpectrumPartition{eta};
    double hit = 0.0;
    {
        // Inline Zipf head mass keeps the oracle free of the caching module.
        double head = 0.0;
        double total = 0.0;
        for (int f = 1; f <= cache->library_size; ++f)
        {
            const double w = std::pow(static_cast<double>(f), -cache->zipf_exponent);
            total += w;
            head += f <= cache->cache_size ? w : 0.0;
        }
        hit = cache->cache_size == cache->library_size ? 1.0 : head / total;
    }
    return AptEstimate(sys, Simulate(sys, cache, opts), hit, eta, gamma0, estimator);
}

namespace {

/// Rejection-sampled E[exp(-s I)]. `attempt(i, value)` simulates candidate i
/// and returns whether the association event holds.
template <typename Attempt>
McEstimate
RejectionLaplace(const LaplaceOptions& opts, Attempt&& attempt)
{
    if (opts.accepted < 1)
    {
        throw InvalidParameter("accepted", "need at least one accepted sample");
    }
    constexpr std::size_t kBlock = 4096;
    std::vector<char> ok(kBlock);
    std::vector<double> value(kBlock);
    Moments m;
    std::size_t attempts = 0;
    for (std::size_t block = 0; m.n < opts.accepted; ++block)
    {
        ParallelFor(kBlock, [&](std::size_t j) {
            double v = 0.0;
            ok[j] = attempt(block * kBlock + j, v) ? 1 : 0;
            value[j] = v;
        });
        for (std::size_t j = 0; j < kBlock && m.n < opts.accepted; ++j)
        {
            ++attempts;
            if (ok[j])
            {
                m.Add(value[j]);
            }
        }
        const double floor_attempts = 10.0 / opts.min_acceptance;
        if (static_cast<double>(attempts) >= floor_attempts &&
            static_cast<double>(m.n) < opts.min_acceptance * static_cast<double>(attempts))
        {
            throw RejectionStarvation("association event accepted " + std::to_string(m.n) + " of " +
                                      std::to_string(attempts) + " candidates");
        }
    }
    return m.Finish(opts.seed);
}

} // namespace

McEstimate
McLaplace(const SystemParams& sys, const CacheParams& cache, LinkClass desired, double r, double s,
          const LaplaceOptions& opts)
{
    RequireRadius(opts.r_sim);
    RequireTail(sys, opts.r_sim, opts.los_tail_radius);
    const LinkModel m = LinkModel::Build(sys, cache);
    const double serving = MeanPower(m, desired, r);
    return RejectionLaplace(opts, [&](std::size_t i, double& v) {
        Engine rng(DeriveStreamSeed(opts.seed, i));
        bool accepted = true;
        double interference = 0.0;
        auto visit = [&](Tier tier) {
            return [&, tier](double d, double, Path path, double h) {
                const double p = MeanPower(m, {tier, path}, d);
                accepted = accepted && p <= serving;
                interference += p * h;
            };
        };
        DrawTier(rng, sys->lambda_m, opts.r_sim, m.beta, visit(Tier::kMbs));
        DrawLosTail(rng, sys->lambda_m, opts.r_sim, opts.los_tail_radius, m.beta, visit(Tier::kMbs));
        DrawTier(rng, sys->lambda_s, opts.r_sim, m.beta, visit(Tier::kSbs));
        DrawLosTail(rng, sys->lambda_s, opts.r_sim, opts.los_tail_radius, m.beta, visit(Tier::kSbs));
        v = std::exp(-s * interference);
        return accepted;
    });
}

McEstimate
McBackhaulLaplace(const SystemParams& sys, const CacheParams& cache, Path desired, double r, double s,
                  const LaplaceOptions& opts)
{
    RequireRadius(opts.r_sim);
    RequireTail(sys, opts.r_sim, opts.los_tail_radius);
    const LinkModel m = LinkModel::Build(sys, cache);
    const double serving = MeanPower(m, {Tier::kMbs, desired}, r);
    return RejectionLaplace(opts, [&](std::size_t i, double& v) {
        Engine rng(DeriveStreamSeed(opts.seed, i));
        bool accepted = true;
        double interference = 0.0;
        auto visit = [&](double d, double, Path path, double h) {
            const double p = MeanPower(m, {Tier::kMbs, path}, d);
            accepted = accepted && p <= serving;
            interference += p * h;
        };
        DrawTier(rng, sys->lambda_m, opts.r_sim, m.beta, visit);
        DrawLosTail(rng, sys->lambda_m, opts.r_sim, opts.los_tail_radius, m.beta, visit);
        v = std::exp(-s * interference);
        return accepted;
    });
}

} // namespace mabhet::mc
