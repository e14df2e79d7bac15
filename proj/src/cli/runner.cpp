#include "mabhet/cli/runner.hpp"

#include "mabhet/association.hpp"
#include "mabhet/caching.hpp"
#include "mabhet/coverage.hpp"
#include "mabhet/parallel.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>

#ifndef MABHET_VERSION
#define MABHET_VERSION "0.0.0"
#endif

namespace mabhet::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

/// One number of a result row.
struct Value
{
    double value = 0.0;
    std::optional<double> std_error;
    std::optional<std::size_t> n;
    std::optional<std::uint64_t> seed;
};

Value
FromEstimate(const mc::McEstimate& e)
{
    return {e.estimate, e.std_error, e.n, e.seed};
}

Value
Exact(double v)
{
    return {v, std::nullopt, std::nullopt, std::nullopt};
}

std::optional<std::size_t>
ClassSlot(std::string_view name, std::string_view prefix)
{
    static constexpr std::string_view kNames[] = {"sbs_los", "sbs_nlos", "mbs_los", "mbs_nlos"};
    if (name.substr(0, prefix.size()) != prefix)
    {
        return std::nullopt;
    }
    const std::string_view rest = name.substr(prefix.size());
    for (std::size_t k = 0; k < 4; ++k)
    {
        if (rest == kNames[k])
        {
            return k;
        }
    }
    return std::nullopt;
}

std::optional<std::size_t>
CaseSlot(std::string_view name)
{
    for (std::size_t k = 0; k < kSbsCaseNames.size(); ++k)
    {
        if (name == kSbsCaseNames[k])
        {
            return k;
        }
    }
    return std::nullopt;
}

/// Evaluates quantities for one sweep point, reusing work across points that
/// share the same network (coverage, simulated snapshots).
class Evaluator
{
  public:
    explicit Evaluator(const RunConfig& base)
        : base_(base)
    {
    }

    Value Analytical(const RunConfig& cfg, const std::string& q)
    {
        const SystemParams sys(cfg.system);
        const CacheParams cache(cfg.cache);
        const double gamma = DbToLinear(cfg.gamma0_db);
        const std::string key = Key(cfg, false);
        if (!coverage_ || coverage_key_ != key)
        {
            coverage_ = ComputeCoverage(sys, cache, gamma, cfg.pdf_mode);
            masses_.reset();
            coverage_key_ = key;
        }
        const double hit = CacheHitRatio(cache);
        if (q == "hit_ratio")
        {
            return Exact(hit);
        }
        if (const auto k = ClassSlot(q, "assoc_"))
        {
            if (!masses_)
            {
                masses_ = ComputeAssociationMasses(sys, cache, cfg.pdf_mode);
            }
            return Exact(masses_->user[*k]);
        }
        if (const auto k = ClassSlot(q, "cov_"))
        {
            return Exact(coverage_->access[*k]);
        }
        if (q == "cov_bh_los" || q == "cov_bh_nlos")
        {
            return Exact(coverage_->backhaul[q == "cov_bh_los" ? 0 : 1]);
        }
        const AptBreakdown apt = ComposeApt(sys, *coverage_, hit, cfg.eta, cfg.sbs_cases);
        if (const auto k = CaseSlot(q))
        {
            return Exact(apt.sbs_case[*k]);
        }
        if (q == "apt_sbs")
        {
            return Exact(apt.r_sbs);
        }
        if (q == "apt_mbs")
        {
            return Exact(apt.r_mbs);
        }
        return Exact(apt.r_total);
    }

    Value MonteCarlo(const RunConfig& cfg, const std::string& q)
    {
        const SystemParams sys(cfg.system);
        const CacheParams cache(cfg.cache);
        const std::string key = Key(cfg, true);
        if (!samples_ || samples_key_ != key)
        {
            samples_ = std::make_unique<mc::SampleSet>(mc::Simulate(sys, cache, cfg.mc.Options()));
            samples_key_ = key;
        }
        const double gamma = DbToLinear(cfg.gamma0_db);
        const double hit = CacheHitRatio(cache);
        if (q == "hit_ratio")
        {
            // Empirical: fraction of SBS-served requests that hit the cache.
            const mc::McAptBreakdown b = mc::AptEstimate(sys, *samples_, hit, 0.5, gamma, cfg.mc.estimator);
            return {1.0 - b.miss_fraction, std::nullopt, samples_->access.size(), cfg.mc.seed};
        }
        if (const auto k = ClassSlot(q, "assoc_"))
        {
            return FromEstimate(mc::AssociationFractions(*samples_).user[*k]);
        }
        const bool coverage = q.rfind("cov_", 0) == 0;
        if (coverage)
        {
            const mc::McCoverage cov =
                mc::CoverageEstimates(*samples_, std::span<const double>(&gamma, 1), cfg.mc.estimator).front();
            if (const auto k = ClassSlot(q, "cov_"))
            {
                return FromEstimate(cov.access[*k]);
            }
            return FromEstimate(cov.backhaul[q == "cov_bh_los" ? 0 : 1]);
        }
        const mc::McAptBreakdown apt = mc::AptEstimate(sys, *samples_, hit, cfg.eta, gamma, cfg.mc.estimator);
        if (const auto k = CaseSlot(q))
        {
            return FromEstimate(apt.sbs_case[*k]);
        }
        if (q == "apt_sbs")
        {
            return FromEstimate(apt.r_sbs);
        }
        if (q == "apt_mbs")
        {
            return FromEstimate(apt.r_mbs);
        }
        return FromEstimate(apt.r_total);
    }

  private:
    /// Resolved text of the inputs a cached result depends on. Neither
    /// coverage nor the snapshots depend on eta or the popularity law, and the
    /// snapshots do not depend on the threshold either.
    std::string Key(RunConfig cfg, bool ignore_threshold) const
    {
        cfg.sweep.values.clear();
        cfg.eta = base_.eta;
        cfg.cache.zipf_exponent = base_.cache.zipf_exponent;
        if (ignore_threshold)
        {
            cfg.gamma0_db = base_.gamma0_db;
        }
        return EmitResolved(cfg);
    }

    const RunConfig& base_;
    std::optional<CoverageResult> coverage_;
    std::optional<AssociationMasses> masses_;
    std::string coverage_key_;
    std::unique_ptr<mc::SampleSet> samples_;
    std::string samples_key_;
};

std::string
SingleLine(std::string s)
{
    for (char& c : s)
    {
        if (c == '\n' || c == '\r')
        {
            c = ' ';
        }
    }
    return s;
}

bool
IsNumericalFailure(const std::exception& e)
{
    return dynamic_cast<const QuadratureFailure*>(&e) != nullptr ||
           dynamic_cast<const RejectionStarvation*>(&e) != nullptr;
}

void
WriteText(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
    {
        throw Error("cannot open " + path + " for writing");
    }
    out << text;
}

json
ColumnSchema(const std::vector<std::string>& columns)
{
    json cols = json::array();
    for (const std::string& c : columns)
    {
        cols.push_back(c);
    }
    return cols;
}

void
EnsureParent(const std::string& path)
{
    const fs::path parent = fs::path(path).parent_path();
    if (!parent.empty())
    {
        fs::create_directories(parent);
    }
}

std::string
Joined(const std::string& dir, const std::string& path)
{
    const fs::path p(path);
    if (p.is_absolute() || dir.empty())
    {
        return p.string();
    }
    return (fs::path(dir) / p).string();
}

/// Loads and validates; prints the anchored message on failure.
std::optional<RunConfig>
LoadValid(const std::string& path, std::ostream& log)
{
    try
    {
        RunConfig cfg = LoadConfig(path);
        ValidateConfig(cfg);
        return cfg;
    }
    catch (const ConfigError& e)
    {
        log << "error: " << e.what() << "\n";
        return std::nullopt;
    }
}

} // namespace

ArtifactPaths
ResolveArtifacts(const RunConfig& cfg, const std::string& out_dir)
{
    const fs::path results(Joined(out_dir, cfg.sweep.output));
    fs::path stem = results;
    stem.replace_extension();
    return {results.string(), stem.string() + ".resolved.yaml", stem.string() + ".manifest.json"};
}

void
RunSweep(const RunConfig& cfg, CsvWriter& csv)
{
    Evaluator eval(cfg);
    const std::string& axis = cfg.sweep.axis;
    for (double v : cfg.AxisValues())
    {
        const RunConfig point = cfg.AtAxis(v);
        const std::string raw = FormatNumber(v);
        const std::string linear = axis == "gamma0_db" ? FormatNumber(DbToLinear(v)) : raw;
        for (Engine engine : cfg.sweep.engines)
        {
            for (const std::string& q : cfg.sweep.quantities)
            {
                try
                {
                    const Value r =
                        engine == Engine::kAnalytical ? eval.Analytical(point, q) : eval.MonteCarlo(point, q);
                    csv.Row({axis, raw, linear, std::string(ToString(engine)), q, FormatNumber(r.value),
                             FormatNumber(r.std_error), r.n ? FormatInteger(*r.n) : "",
                             r.seed ? FormatInteger(*r.seed) : "", "ok"});
                }
                catch (const Error& e)
                {
                    csv.Row({axis, raw, linear, std::string(ToString(engine)), "failure", "", "", "", "",
                             "error: " + SingleLine(e.what())});
                    throw;
                }
            }
        }
    }
}

int
RunCommand(const std::string& config_path, const std::string& out_dir, std::ostream& log)
{
    const std::optional<RunConfig> cfg = LoadValid(config_path, log);
    if (!cfg)
    {
        return kExitConfig;
    }
    const ArtifactPaths paths = ResolveArtifacts(*cfg, out_dir);
    EnsureParent(paths.results);
    WriteText(paths.resolved, EmitResolved(*cfg));

    json manifest;
    manifest["tool"] = "mabhet-cli";
    manifest["version"] = MABHET_VERSION;
    manifest["command"] = "run";
    manifest["config"] = config_path;
    manifest["resolved_config"] = fs::path(paths.resolved).filename().string();
    manifest["seed"] = cfg->mc.seed;
    manifest["outputs"] = json::array(
        {{{"path", fs::path(paths.results).filename().string()}, {"columns", ColumnSchema(kResultColumns)}}});

    int code = kExitOk;
    try
    {
        CsvWriter csv(paths.results, kResultColumns);
        RunSweep(*cfg, csv);
        manifest["status"] = "ok";
    }
    catch (const Error& e)
    {
        log << "error: " << e.what() << "\n";
        manifest["status"] = "failed";
        manifest["error"] = SingleLine(e.what());
        code = IsNumericalFailure(e) ? kExitNumerical : kExitConfig;
    }
    WriteText(paths.manifest, manifest.dump(2) + "\n");
    if (code == kExitOk)
    {
        log << "wrote " << paths.results << "\n";
    }
    return code;
}

int
ValidateCommand(const std::string& config_path, std::ostream& log)
{
    if (!LoadValid(config_path, log))
    {
        return kExitConfig;
    }
    log << config_path << ": ok\n";
    return kExitOk;
}

int
McCompareCommand(const std::string& config_path, const std::string& out_dir, std::ostream& log)
{
    const std::optional<RunConfig> cfg = LoadValid(config_path, log);
    if (!cfg)
    {
        return kExitConfig;
    }
    std::vector<double> gammas_db{0.0, 5.0, 10.0, 15.0, 20.0};
    if (cfg->sweep.axis == "gamma0_db" && !cfg->sweep.values.empty())
    {
        gammas_db = cfg->sweep.values;
    }
    const ArtifactPaths paths = ResolveArtifacts(*cfg, out_dir);
    fs::path stem(paths.results);
    stem.replace_extension();
    const std::string golden_path = stem.string() + ".mc.csv";
    const std::string compare_path = stem.string() + ".compare.csv";
    EnsureParent(golden_path);

    try
    {
        const SystemParams sys(cfg->system);
        const CacheParams cache(cfg->cache);
        const mc::SampleSet samples = mc::Simulate(sys, cache, cfg->mc.Options());
        const mc::McAssociation assoc = mc::AssociationFractions(samples);
        const AssociationMasses masses = ComputeAssociationMasses(sys, cache, cfg->pdf_mode);
        std::vector<double> gammas;
        for (double g : gammas_db)
        {
            gammas.push_back(DbToLinear(g));
        }
        const std::vector<mc::McCoverage> sim = mc::CoverageEstimates(samples, gammas, cfg->mc.estimator);

        CsvWriter golden(golden_path, kGoldenColumns);
        CsvWriter compare(compare_path, kCompareColumns);
        double worst = 0.0;
        auto emit = [&](const std::string& quantity, const std::string& cls, const std::string& gamma_db,
                        double analytical, const mc::McEstimate& e) {
            const std::string se = FormatNumber(e.std_error);
            golden.Row({quantity, cls, gamma_db, FormatNumber(e.estimate), se, FormatInteger(e.n),
                        FormatInteger(e.seed)});
            const double diff = std::abs(analytical - e.estimate);
            worst = std::max(worst, diff);
            compare.Row({quantity, cls, gamma_db, FormatNumber(analytical), FormatNumber(e.estimate), se,
                         FormatNumber(diff), FormatInteger(e.n), FormatInteger(e.seed)});
        };
        for (LinkClass c : kAllLinkClasses)
        {
            emit("association", std::string(ToString(c)), "", masses.user[Index(c)], assoc.user[Index(c)]);
        }
        for (std::size_t i = 0; i < gammas.size(); ++i)
        {
            const CoverageResult an = ComputeCoverage(sys, cache, gammas[i], cfg->pdf_mode);
            const std::string g = FormatNumber(gammas_db[i]);
            for (LinkClass c : kAllLinkClasses)
            {
                emit("coverage", std::string(ToString(c)), g, an[c], sim[i].access[Index(c)]);
            }
            for (Path p : {Path::kLos, Path::kNlos})
            {
                emit("coverage", "bh_" + std::string(ToString(p)), g, an.backhaul_path(p),
                     sim[i].backhaul[Index(p)]);
            }
        }
        log << "wrote " << golden_path << " and " << compare_path << "\n";
        log << "max |analytical - montecarlo| = " << FormatNumber(worst) << "\n";
    }
    catch (const Error& e)
    {
        log << "error: " << e.what() << "\n";
        return IsNumericalFailure(e) ? kExitNumerical : kExitConfig;
    }
    return kExitOk;
}

namespace {

struct Profile
{
    const char* name;
    CacheParams (*make)(int);
};

CacheParams
DefaultProfile(int c)
{
    return CacheParams(CacheSettings{}).WithCacheSize(c);
}

constexpr Profile kProfiles[] = {{"default", &DefaultProfile}, {"4mbit", &CacheParams::FourMegabitProfile}};

constexpr double kFigureGammaDb = 10.0;

std::vector<double>
EtaGrid(int points)
{
    std::vector<double> grid;
    for (int i = 0; i < points; ++i)
    {
        grid.push_back(i + 1 == points ? 1.0 : static_cast<double>(i) / (points - 1));
    }
    return grid;
}

void
Fig2(const FigureOptions& opts, CsvWriter& csv)
{
    const double gamma = DbToLinear(kFigureGammaDb);
    for (double lambda_m : {1e-5, 2e-5, 4e-5})
    {
        SystemSettings s;
        s.lambda_m = lambda_m;
        const SystemParams sys(s);
        for (int c : {100, 200, 300, 400})
        {
            const EtaOptimum opt = OptimizeEta(sys, CacheParams::FourMegabitProfile(c), gamma, opts.eta_points);
            csv.Row({"4mbit", FormatNumber(lambda_m), FormatInteger(c), FormatNumber(opt.eta), FormatNumber(opt.apt),
                     opt.tie ? "1" : "0"});
        }
    }
}

void
Fig3(const FigureOptions& opts, CsvWriter& csv)
{
    const SystemParams sys(SystemSettings{});
    const double gamma = DbToLinear(kFigureGammaDb);
    for (const Profile& p : kProfiles)
    {
        for (int c : {0, 100})
        {
            const CacheParams cache = p.make(c);
            const CoverageResult cov = ComputeCoverage(sys, cache, gamma);
            const double hit = CacheHitRatio(cache);
            for (double eta : EtaGrid(opts.eta_points))
            {
                const AptBreakdown b = ComposeApt(sys, cov, hit, eta);
                csv.Row({p.name, c == 0 ? "no_cache" : "cache", FormatInteger(c), FormatNumber(eta),
                         FormatNumber(b.r_total), FormatNumber(b.r_sbs), FormatNumber(b.r_mbs)});
            }
        }
    }
}

void
Fig4(const FigureOptions& opts, CsvWriter& csv)
{
    const SystemParams sys(SystemSettings{});
    const double gamma = DbToLinear(kFigureGammaDb);
    for (const Profile& p : kProfiles)
    {
        const int c_max = MaxFeasibleCacheSize(sys, p.make(0));
        std::vector<int> sizes;
        for (int c = 0; c <= c_max; c += opts.cache_step)
        {
            sizes.push_back(c);
        }
        if (sizes.back() != c_max)
        {
            sizes.push_back(c_max);
        }
        std::vector<CoverageResult> cov(sizes.size());
        ParallelFor(sizes.size(), [&](std::size_t i) { cov[i] = ComputeCoverage(sys, p.make(sizes[i]), gamma); });
        for (double eta : {0.3, 0.5, 0.7})
        {
            for (std::size_t i = 0; i < sizes.size(); ++i)
            {
                const CacheParams cache = p.make(sizes[i]);
                const double hit = CacheHitRatio(cache);
                const AptBreakdown b = ComposeApt(sys, cov[i], hit, eta);
                csv.Row({p.name, FormatNumber(eta), FormatInteger(sizes[i]), FormatNumber(SbsTxPower(sys, cache)),
                         FormatNumber(hit), FormatNumber(b.r_total), FormatNumber(b.r_sbs), FormatNumber(b.r_mbs)});
            }
        }
    }
}

void
Fig5(const FigureOptions& opts, CsvWriter& csv)
{
    const SystemParams sys(SystemSettings{});
    for (const Profile& p : kProfiles)
    {
        for (int c : {0, 100})
        {
            const CacheParams cache = p.make(c);
            const double eta = OptimizeEta(sys, cache, DbToLinear(kFigureGammaDb), opts.eta_points).eta;
            const std::string series = "C=" + FormatInteger(c) + " eta=" + FormatNumber(std::round(eta * 1e4) / 1e4);
            for (double g_db : {0.0, 5.0, 10.0, 15.0, 20.0, 25.0})
            {
                const double g = DbToLinear(g_db);
                const AptBreakdown b = AptTotal(sys, cache, eta, g);
                csv.Row({p.name, series, FormatInteger(c), FormatNumber(eta), FormatNumber(g_db), FormatNumber(g),
                         FormatNumber(b.r_total)});
            }
        }
    }
}

} // namespace

int
FiguresCommand(const FigureOptions& opts, std::ostream& log)
{
    if (opts.cache_step < 1 || opts.eta_points < 3)
    {
        log << "error: cache step must be >= 1 and eta grid needs at least 3 points\n";
        return kExitUsage;
    }
    fs::create_directories(opts.out_dir);
    struct Figure
    {
        const char* file;
        std::vector<std::string> columns;
        void (*fill)(const FigureOptions&, CsvWriter&);
        const char* description;
    };
    const std::vector<Figure> figures{
        {"fig2.csv",
         {"profile", "lambda_m", "cache_size", "eta_opt", "apt_opt", "tie"},
         &Fig2,
         "optimal access share per cache size and MBS density, gamma0 = 10 dB"},
        {"fig3.csv",
         {"profile", "series", "cache_size", "eta", "apt_total", "r_sbs", "r_mbs"},
         &Fig3,
         "throughput against access share with and without cache, gamma0 = 10 dB"},
        {"fig4.csv",
         {"profile", "eta", "cache_size", "sbs_tx_power_w", "hit_ratio", "apt_total", "r_sbs", "r_mbs"},
         &Fig4,
         "throughput against cache size up to the power budget, gamma0 = 10 dB"},
        {"fig5.csv",
         {"profile", "series", "cache_size", "eta", "gamma0_db", "gamma0_linear", "apt_total"},
         &Fig5,
         "throughput against SINR threshold, eta optimized at 10 dB per cache size"},
    };

    json manifest;
    manifest["tool"] = "mabhet-cli";
    manifest["version"] = MABHET_VERSION;
    manifest["command"] = "figures";
    manifest["settings"] = {{"eta_points", opts.eta_points}, {"cache_step", opts.cache_step}};
    manifest["outputs"] = json::array();
    const std::string manifest_path = (fs::path(opts.out_dir) / "figures.manifest.json").string();
    int code = kExitOk;
    for (const Figure& f : figures)
    {
        const std::string path = (fs::path(opts.out_dir) / f.file).string();
        CsvWriter csv(path, f.columns);
        json entry = {{"path", f.file}, {"columns", ColumnSchema(f.columns)}, {"description", f.description}};
        try
        {
            f.fill(opts, csv);
            entry["status"] = "ok";
            log << "wrote " << path << "\n";
        }
        catch (const Error& e)
        {
            std::vector<std::string> marker(f.columns.size());
            marker[0] = "failure";
            marker.back() = "error: " + SingleLine(e.what());
            csv.Row(marker);
            entry["status"] = "failed";
            entry["error"] = SingleLine(e.what());
            log << "error: " << f.file << ": " << e.what() << "\n";
            code = IsNumericalFailure(e) ? kExitNumerical : kExitConfig;
        }
        manifest["outputs"].push_back(entry);
        if (code != kExitOk)
        {
            break;
        }
    }
    WriteText(manifest_path, manifest.dump(2) + "\n");
    return code;
}

} // namespace mabhet::cli
