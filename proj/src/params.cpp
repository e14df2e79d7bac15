#include "mabhet/params.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mabhet {

namespace {

void
RequireFinite(double v, const char* field)
{
    if (!std::isfinite(v))
    {
        throw InvalidParameter(field, "must be finite");
    }
}

void
RequirePositive(double v, const char* field)
{
    RequireFinite(v, field);
    if (!(v > 0.0))
    {
        throw InvalidParameter(field, "must be > 0, got " + std::to_string(v));
    }
}

void
RequireNonNegative(double v, const char* field)
{
    RequireFinite(v, field);
    if (v < 0.0)
    {
        throw InvalidParameter(field, "must be >= 0, got " + std::to_string(v));
    }
}

constexpr double kThermalDbmPerHz = -174.0;

} // namespace

std::string_view
ToString(Tier t) noexcept
{
    return t == Tier::kSbs ? "sbs" : "mbs";
}

std::string_view
ToString(Path p) noexcept
{
    return p == Path::kLos ? "los" : "nlos";
}

std::string_view
ToString(LinkClass c) noexcept
{
    static constexpr std::string_view kNames[] = {"sbs_los", "sbs_nlos", "mbs_los", "mbs_nlos"};
    return kNames[Index(c)];
}

SystemParams::SystemParams(const SystemSettings& s)
    : s_(s)
{
    // A single tier may be switched off, but not both.
    RequireNonNegative(s.lambda_m, "system.lambda_m");
    RequireNonNegative(s.lambda_s, "system.lambda_s");
    if (s.lambda_m + s.lambda_s <= 0.0)
    {
        throw InvalidParameter("system.lambda_s", "at least one BS tier must have positive density");
    }
    RequirePositive(s.lambda_u, "system.lambda_u");
    RequirePositive(s.total_bandwidth_hz, "system.total_bandwidth_hz");
    RequirePositive(s.a_los, "system.a_los");
    RequirePositive(s.a_nlos, "system.a_nlos");
    RequirePositive(s.alpha_los, "system.alpha_los");
    RequirePositive(s.alpha_nlos, "system.alpha_nlos");
    RequireNonNegative(s.beta, "system.beta");
    RequirePositive(s.p_tot_s, "system.p_tot_s");
    RequirePositive(s.p_tot_m, "system.p_tot_m");
    RequirePositive(s.p_fc_s, "system.p_fc_s");
    RequirePositive(s.p_fc_m, "system.p_fc_m");
    if (s.p_fc_s >= s.p_tot_s)
    {
        throw InvalidParameter("system.p_fc_s", "fixed circuit power must be below p_tot_s");
    }
    if (s.p_fc_m >= s.p_tot_m)
    {
        throw InvalidParameter("system.p_fc_m", "fixed circuit power must be below p_tot_m");
    }
    RequirePositive(s.rho_s, "system.rho_s");
    RequirePositive(s.rho_m, "system.rho_m");
    RequirePositive(s.bias_s, "system.bias_s");
    RequirePositive(s.bias_m, "system.bias_m");
    if (const auto* c = std::get_if<ConstantWatts>(&s.noise))
    {
        RequirePositive(c->watts, "system.noise.watts");
    }
    else
    {
        RequireFinite(std::get<ThermalPlusNoiseFigure>(s.noise).noise_figure_db, "system.noise.noise_figure_db");
    }
}

CacheParams::CacheParams(const CacheSettings& s)
    : s_(s)
{
    if (s.library_size < 1)
    {
        throw InvalidParameter("cache.library_size", "library must hold at least one file");
    }
    if (s.cache_size < 0 || s.cache_size > s.library_size)
    {
        throw InvalidParameter("cache.cache_size",
                               "must lie in [0, library_size], got " + std::to_string(s.cache_size));
    }
    RequirePositive(s.zipf_exponent, "cache.zipf_exponent");
    RequireNonNegative(s.w_ca, "cache.w_ca");
    RequirePositive(s.file_size_bits, "cache.file_size_bits");
}

CacheParams
CacheParams::FourMegabitProfile(int cache_size)
{
    CacheSettings s;
    s.cache_size = cache_size;
    s.file_size_bits = 4e6;
    return CacheParams(s);
}

CacheParams
CacheParams::WithCacheSize(int cache_size) const
{
    CacheSettings s = s_;
    s.cache_size = cache_size;
    return CacheParams(s);
}

SpectrumPartition::SpectrumPartition(double eta)
    : eta_(eta)
{
    if (!(eta >= 0.0 && eta <= 1.0))
    {
        throw InvalidParameter("partition.eta", "must lie in [0, 1], got " + std::to_string(eta));
    }
}

double
SbsTxPower(const SystemParams& sys, const CacheParams& cache)
{
    const double budget = sys->p_tot_s - sys->p_fc_s - cache.StoragePower(cache->cache_size);
    if (!(budget > 0.0))
    {
        throw NonPositiveTxPower("SBS cache power " + std::to_string(cache.StoragePower(cache->cache_size)) +
                                 " W exhausts the transmit budget");
    }
    return budget / sys->rho_s;
}

double
MbsTxPower(const SystemParams& sys, const CacheParams& cache)
{
    const double budget = sys->p_tot_m - sys->p_fc_m - cache.StoragePower(cache->library_size);
    if (!(budget > 0.0))
    {
        throw NonPositiveTxPower("MBS library cache power " +
                                 std::to_string(cache.StoragePower(cache->library_size)) +
                                 " W exhausts the transmit budget");
    }
    return budget / sys->rho_m;
}

double
NoisePower(const SystemParams& sys)
{
    if (const auto* c = std::get_if<ConstantWatts>(&sys->noise))
    {
        return c->watts;
    }
    const double nf = std::get<ThermalPlusNoiseFigure>(sys->noise).noise_figure_db;
    const double dbm = kThermalDbmPerHz + 10.0 * std::log10(sys->total_bandwidth_hz) + nf;
    return 1e-3 * std::pow(10.0, dbm / 10.0);
}

int
MaxFeasibleCacheSize(const SystemParams& sys, const CacheParams& cache)
{
    const double per_file = cache.StoragePower(1.0);
    const double budget = sys->p_tot_s - sys->p_fc_s;
    if (per_file <= 0.0)
    {
        return cache->library_size;
    }
    int c = static_cast<int>(std::ceil(budget / per_file)) - 1;
    while (c >= 0 && !(budget - cache.StoragePower(c) > 0.0))
    {
        --c;
    }
    while (c + 1 <= cache->library_size && budget - cache.StoragePower(c + 1) > 0.0)
    {
        ++c;
    }
    return std::min(c, cache->library_size);
}

double
DbToLinear(double db) noexcept
{
    return std::pow(10.0, db / 10.0);
}

double
LinearToDb(double linear) noexcept
{
    return 10.0 * std::log10(linear);
}

LinkModel
LinkModel::Build(const SystemParams& sys, const CacheParams& cache)
{
    LinkModel m;
    m.density = {sys->lambda_s, sys->lambda_m};
    m.tx_power = {SbsTxPower(sys, cache), MbsTxPower(sys, cache)};
    m.bias = {sys->bias_s, sys->bias_m};
    m.intercept = {sys->a_los, sys->a_nlos};
    m.exponent = {sys->alpha_los, sys->alpha_nlos};
    m.beta = sys->beta;
    m.noise = NoisePower(sys);
    return m;
}

} // namespace mabhet
