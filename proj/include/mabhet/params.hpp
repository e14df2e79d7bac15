#pragma once

#include "mabhet/errors.hpp"

#include <array>
#include <cmath>
#include <string_view>
#include <variant>

namespace mabhet {

enum class Tier
{
    kSbs,
    kMbs,
};

enum class Path
{
    kLos,
    kNlos,
};

/// (tier, path) tag of a BS-to-receiver link.
struct LinkClass
{
    Tier tier;
    Path path;

    friend constexpr bool operator==(LinkClass, LinkClass) = default;
};

inline constexpr std::array<LinkClass, 4> kAllLinkClasses{{
    {Tier::kSbs, Path::kLos},
    {Tier::kSbs, Path::kNlos},
    {Tier::kMbs, Path::kLos},
    {Tier::kMbs, Path::kNlos},
}};

constexpr std::size_t
Index(Tier t) noexcept
{
    return t == Tier::kSbs ? 0 : 1;
}

constexpr std::size_t
Index(Path p) noexcept
{
    return p == Path::kLos ? 0 : 1;
}

/// Position of a class inside kAllLinkClasses.
constexpr std::size_t
Index(LinkClass c) noexcept
{
    return 2 * Index(c.tier) + Index(c.path);
}

std::string_view ToString(Tier t) noexcept;
std::string_view ToString(Path p) noexcept;
/// "sbs_los", "mbs_nlos", ...
std::string_view ToString(LinkClass c) noexcept;

/// Fixed noise floor in watts.
struct ConstantWatts
{
    double watts;
};

/// kTB thermal noise (-174 dBm/Hz) over the full band plus a receiver noise figure.
struct ThermalPlusNoiseFigure
{
    double noise_figure_db;
};

using NoiseModel = std::variant<ConstantWatts, ThermalPlusNoiseFigure>;

/// Raw network settings. Defaults are the evaluation setup of the model
/// (densities, 400 MHz band, 28 GHz-class path loss, blockage, power model).
struct SystemSettings
{
    double lambda_m = 1e-5; ///< MBS density [1/m^2]
    double lambda_s = 1e-4; ///< SBS density [1/m^2]
    double lambda_u = 3e-4; ///< user density [1/m^2]
    double total_bandwidth_hz = 400e6;
    double a_los = std::pow(10.0, -10.38);
    double a_nlos = std::pow(10.0, -14.54);
    double alpha_los = 2.09;
    double alpha_nlos = 3.75;
    double beta = 2.7e-2; ///< blockage rate [1/m]
    double p_tot_s = 9.1;
    double p_tot_m = 610.0;
    double p_fc_s = 0.1;
    double p_fc_m = 10.16;
    double rho_s = 4.0;
    double rho_m = 15.13;
    double bias_s = 10.0;
    double bias_m = 1.0;
    NoiseModel noise = ThermalPlusNoiseFigure{5.0};
};

/// Validated, immutable network parameters.
class SystemParams
{
  public:
    /// Throws InvalidParameter naming the first offending field.
    explicit SystemParams(const SystemSettings& settings);
    SystemParams() : SystemParams(SystemSettings{}) {}

    const SystemSettings& settings() const noexcept { return s_; }
    const SystemSettings* operator->() const noexcept { return &s_; }

    double density(Tier t) const noexcept { return t == Tier::kSbs ? s_.lambda_s : s_.lambda_m; }
    double bias(Tier t) const noexcept { return t == Tier::kSbs ? s_.bias_s : s_.bias_m; }
    double intercept(Path p) const noexcept { return p == Path::kLos ? s_.a_los : s_.a_nlos; }
    double exponent(Path p) const noexcept { return p == Path::kLos ? s_.alpha_los : s_.alpha_nlos; }

  private:
    SystemSettings s_;
};

struct CacheSettings
{
    int library_size = 1000;   ///< F
    int cache_size = 100;      ///< C
    double zipf_exponent = 0.6;
    double w_ca = 2.5e-9;      ///< caching power [W/bit]
    double file_size_bits = 3.2e7;
};

/// Validated caching configuration.
class CacheParams
{
  public:
    explicit CacheParams(const CacheSettings& settings);
    CacheParams() : CacheParams(CacheSettings{}) {}

    /// Same library, cache size C and 4 Mbit files. With this profile the SBS
    /// power budget is exhausted near C = 900 instead of C = 112.
    static CacheParams FourMegabitProfile(int cache_size = 100);

    const CacheSettings& settings() const noexcept { return s_; }
    const CacheSettings* operator->() const noexcept { return &s_; }

    /// Copy with a different cache size (re-validated).
    CacheParams WithCacheSize(int cache_size) const;

    /// Power drawn by storing `files` files [W].
    double StoragePower(double files) const noexcept { return files * s_.file_size_bits * s_.w_ca; }

  private:
    CacheSettings s_;
};

/// Access share eta of the band; the backhaul gets the rest.
class SpectrumPartition
{
  public:
    explicit SpectrumPartition(double eta);

    double eta() const noexcept { return eta_; }
    double AccessBandwidth(double total_hz) const noexcept { return eta_ * total_hz; }
    double BackhaulBandwidth(double total_hz) const noexcept { return total_hz - AccessBandwidth(total_hz); }

  private:
    double eta_;
};

/// SBS transmit power (P_tot - P_fc - P_cache(C)) / rho_s.
double SbsTxPower(const SystemParams& sys, const CacheParams& cache);
/// MBS transmit power; the MBS stores the whole library.
double MbsTxPower(const SystemParams& sys, const CacheParams& cache);
/// N0 in watts.
double NoisePower(const SystemParams& sys);

/// Largest integer cache size that still leaves a positive SBS transmit power.
int MaxFeasibleCacheSize(const SystemParams& sys, const CacheParams& cache);

double DbToLinear(double db) noexcept;
double LinearToDb(double linear) noexcept;

/// Per-class constants derived once from (sys, cache): everything the
/// analytical and simulation kernels need in their inner loops.
struct LinkModel
{
    std::array<double, 2> density;   ///< by Tier index
    std::array<double, 2> tx_power;  ///< by Tier index [W]
    std::array<double, 2> bias;      ///< by Tier index
    std::array<double, 2> intercept; ///< by Path index
    std::array<double, 2> exponent;  ///< by Path index
    double beta;
    double noise;

    static LinkModel Build(const SystemParams& sys, const CacheParams& cache);

    /// P_k^tr * B_k * A_X: biased received power at 1 m.
    double Strength(LinkClass c) const noexcept
    {
        return tx_power[Index(c.tier)] * bias[Index(c.tier)] * intercept[Index(c.path)];
    }
    double Exponent(Path p) const noexcept { return exponent[Index(p)]; }
};

} // namespace mabhet
