#include "mabhet/cli/config.hpp"

#include "mabhet/cli/csv.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace mabhet::cli {

std::string_view
ToString(Engine e) noexcept
{
    return e == Engine::kAnalytical ? "analytical" : "montecarlo";
}

namespace {

struct DoubleField
{
    const char* name;
    double SystemSettings::*member;
};

constexpr DoubleField kSystemDoubles[] = {
    {"lambda_m", &SystemSettings::lambda_m},
    {"lambda_s", &SystemSettings::lambda_s},
    {"lambda_u", &SystemSettings::lambda_u},
    {"total_bandwidth_hz", &SystemSettings::total_bandwidth_hz},
    {"a_los", &SystemSettings::a_los},
    {"a_nlos", &SystemSettings::a_nlos},
    {"alpha_los", &SystemSettings::alpha_los},
    {"alpha_nlos", &SystemSettings::alpha_nlos},
    {"beta", &SystemSettings::beta},
    {"p_tot_s", &SystemSettings::p_tot_s},
    {"p_tot_m", &SystemSettings::p_tot_m},
    {"p_fc_s", &SystemSettings::p_fc_s},
    {"p_fc_m", &SystemSettings::p_fc_m},
    {"rho_s", &SystemSettings::rho_s},
    {"rho_m", &SystemSettings::rho_m},
    {"bias_s", &SystemSettings::bias_s},
    {"bias_m", &SystemSettings::bias_m},
};

std::string
Position(const YAML::Mark& m)
{
    return std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1);
}

class Parser
{
  public:
    explicit Parser(RunConfig& cfg)
        : cfg_(cfg)
    {
    }

    [[noreturn]] void Fail(const YAML::Node& node, const std::string& key, const std::string& what) const
    {
        throw ConfigError(cfg_.source + ":" + Position(node.Mark()), key, what);
    }

    /// Walks a mapping, recording key positions; `visit` returns false for unknown keys.
    void Map(const YAML::Node& node, const std::string& prefix,
             const std::function<bool(const std::string&, const YAML::Node&)>& visit)
    {
        if (!node.IsMap())
        {
            Fail(node, prefix.empty() ? "<document>" : prefix, "expected a mapping");
        }
        for (const auto& kv : node)
        {
            const std::string name = kv.first.as<std::string>();
            const std::string key = prefix.empty() ? name : prefix + "." + name;
            cfg_.positions[key] = Position(kv.first.Mark());
            if (!visit(name, kv.second))
            {
                Fail(kv.first, key, "unknown key");
            }
        }
    }

    template <typename T>
    T As(const YAML::Node& node, const std::string& key, const char* expected) const
    {
        if (!node.IsScalar())
        {
            Fail(node, key, std::string("expected ") + expected);
        }
        try
        {
            return node.as<T>();
        }
        catch (const YAML::Exception&)
        {
            Fail(node, key, std::string("expected ") + expected + ", got '" + node.Scalar() + "'");
        }
    }

    double Number(const YAML::Node& node, const std::string& key) const
    {
        const double v = As<double>(node, key, "a number");
        if (!std::isfinite(v))
        {
            Fail(node, key, "must be finite");
        }
        return v;
    }

    std::string Choice(const YAML::Node& node, const std::string& key,
                       std::initializer_list<std::string_view> allowed) const
    {
        const std::string v = As<std::string>(node, key, "a string");
        if (std::find(allowed.begin(), allowed.end(), v) == allowed.end())
        {
            std::string list;
            for (std::string_view a : allowed)
            {
                list += (list.empty() ? "" : ", ") + std::string(a);
            }
            Fail(node, key, "'" + v + "' is not one of " + list);
        }
        return v;
    }

    void Document(const YAML::Node& root)
    {
        if (root.IsNull())
        {
            return;
        }
        Map(root, "", [&](const std::string& name, const YAML::Node& v) {
            if (name == "system")
            {
                System(v);
            }
            else if (name == "cache")
            {
                Cache(v);
            }
            else if (name == "partition")
            {
                Map(v, "partition", [&](const std::string& k, const YAML::Node& x) {
                    if (k != "eta")
                    {
                        return false;
                    }
                    cfg_.eta = Number(x, "partition.eta");
                    return true;
                });
            }
            else if (name == "sweep")
            {
                Sweep(v);
            }
            else if (name == "mc")
            {
                Mc(v);
            }
            else
            {
                return false;
            }
            return true;
        });
    }

  private:
    void System(const YAML::Node& node)
    {
        SystemSettings& s = cfg_.system;
        Map(node, "system", [&](const std::string& name, const YAML::Node& v) {
            const std::string key = "system." + name;
            for (const DoubleField& f : kSystemDoubles)
            {
                if (name == f.name)
                {
                    s.*f.member = Number(v, key);
                    return true;
                }
            }
            if (name == "gamma0_db")
            {
                cfg_.gamma0_db = Number(v, key);
            }
            else if (name == "pdf_mode")
            {
                cfg_.pdf_mode = Choice(v, key, {"thinned", "unthinned"}) == "thinned" ? PdfMode::kThinned
                                                                                          : PdfMode::kUnthinned;
            }
            else if (name == "sbs_cases")
            {
                cfg_.sbs_cases = Choice(v, key, {"matched", "all_los"}) == "matched"
                                     ? SbsCaseVariant::kMatched
                                     : SbsCaseVariant::kAllLos;
            }
            else if (name == "noise")
            {
                Noise(v);
            }
            else
            {
                return false;
            }
            return true;
        });
    }

    void Noise(const YAML::Node& node)
    {
        std::string model = "thermal";
        double nf_db = 5.0;
        double watts = 0.0;
        bool has_watts = false;
        Map(node, "system.noise", [&](const std::string& name, const YAML::Node& v) {
            const std::string key = "system.noise." + name;
            if (name == "model")
            {
                model = Choice(v, key, {"thermal", "constant"});
            }
            else if (name == "noise_figure_db")
            {
                nf_db = Number(v, key);
            }
            else if (name == "watts")
            {
                watts = Number(v, key);
                has_watts = true;
            }
            else
            {
                return false;
            }
            return true;
        });
        if (model == "constant")
        {
            if (!has_watts)
            {
                Fail(node, "system.noise.watts", "required when model is constant");
            }
            cfg_.system.noise = ConstantWatts{watts};
        }
        else
        {
            cfg_.system.noise = ThermalPlusNoiseFigure{nf_db};
        }
    }

    void Cache(const YAML::Node& node)
    {
        CacheSettings& c = cfg_.cache;
        Map(node, "cache", [&](const std::string& name, const YAML::Node& v) {
            const std::string key = "cache." + name;
            if (name == "library_size")
            {
                c.library_size = As<int>(v, key, "an integer");
            }
            else if (name == "cache_size")
            {
                c.cache_size = As<int>(v, key, "an integer");
            }
            else if (name == "zipf_exponent")
            {
                c.zipf_exponent = Number(v, key);
            }
            else if (name == "w_ca")
            {
                c.w_ca = Number(v, key);
            }
            else if (name == "file_size_bits")
            {
                c.file_size_bits = Number(v, key);
            }
            else
            {
                return false;
            }
            return true;
        });
    }

    void Sweep(const YAML::Node& node)
    {
        SweepSpec& sw = cfg_.sweep;
        std::optional<double> start;
        std::optional<double> stop;
        std::optional<int> points;
        bool has_values = false;
        Map(node, "sweep", [&](const std::string& name, const YAML::Node& v) {
            const std::string key = "sweep." + name;
            if (name == "axis")
            {
                sw.axis = Choice(v, key, {"eta", "cache_size", "gamma0_db", "lambda_m", "zipf_exponent"});
            }
            else if (name == "start")
            {
                start = Number(v, key);
            }
            else if (name == "stop")
            {
                stop = Number(v, key);
            }
            else if (name == "points")
            {
                points = As<int>(v, key, "an integer");
            }
            else if (name == "values")
            {
                if (!v.IsSequence() || v.size() == 0)
                {
                    Fail(v, key, "expected a nonempty list of numbers");
                }
                sw.values.clear();
                for (const auto& x : v)
                {
                    sw.values.push_back(Number(x, key));
                }
                has_values = true;
            }
            else if (name == "engines")
            {
                const std::string e = Choice(v, key, {"analytical", "montecarlo", "both"});
                sw.engines.clear();
                if (e != "montecarlo")
                {
                    sw.engines.push_back(Engine::kAnalytical);
                }
                if (e != "analytical")
                {
                    sw.engines.push_back(Engine::kMonteCarlo);
                }
            }
            else if (name == "quantities")
            {
                sw.quantities.clear();
                auto add = [&](const YAML::Node& q) {
                    const std::string s = As<std::string>(q, key, "a quantity name");
                    if (std::find(kQuantities.begin(), kQuantities.end(), s) == kQuantities.end())
                    {
                        Fail(q, key, "unknown quantity '" + s + "'");
                    }
                    sw.quantities.push_back(s);
                };
                if (v.IsSequence())
                {
                    for (const auto& q : v)
                    {
                        add(q);
                    }
                }
                else
                {
                    add(v);
                }
                if (sw.quantities.empty())
                {
                    Fail(v, key, "at least one quantity is required");
                }
            }
            else if (name == "output")
            {
                sw.output = As<std::string>(v, key, "a path");
                if (sw.output.empty())
                {
                    Fail(v, key, "must not be empty");
                }
            }
            else
            {
                return false;
            }
            return true;
        });

        const bool grid = start || stop || points;
        if (grid && has_values)
        {
            Fail(node, "sweep", "give either values or start/stop/points, not both");
        }
        if (grid)
        {
            if (!start || !stop || !points)
            {
                Fail(node, "sweep", "start, stop and points must be given together");
            }
            if (*points < 1)
            {
                Fail(node["points"], "sweep.points", "must be >= 1");
            }
            sw.values.clear();
            for (int i = 0; i < *points; ++i)
            {
                sw.values.push_back(i + 1 == *points && *points > 1
                                        ? *stop
                                        : *start + (*stop - *start) * i / std::max(1, *points - 1));
            }
        }
    }

    void Mc(const YAML::Node& node)
    {
        McSettings& m = cfg_.mc;
        Map(node, "mc", [&](const std::string& name, const YAML::Node& v) {
            const std::string key = "mc." + name;
            if (name == "realizations")
            {
                const long long n = As<long long>(v, key, "an integer");
                if (n < 1)
                {
                    Fail(v, key, "must be >= 1");
                }
                m.realizations = static_cast<std::size_t>(n);
            }
            else if (name == "r_sim")
            {
                m.r_sim = Number(v, key);
            }
            else if (name == "los_tail_radius")
            {
                m.los_tail_radius = Number(v, key);
            }
            else if (name == "seed")
            {
                m.seed = As<std::uint64_t>(v, key, "a nonnegative integer");
            }
            else if (name == "estimator")
            {
                m.estimator = Choice(v, key, {"indicator", "conditional"}) == "indicator"
                                  ? mc::Estimator::kIndicator
                                  : mc::Estimator::kConditional;
            }
            else if (name == "importance")
            {
                Map(v, key, [&](const std::string& k, const YAML::Node& x) {
                    const std::string sub = key + "." + k;
                    if (k == "sbs_radius")
                    {
                        m.importance.sbs_radius = Number(x, sub);
                    }
                    else if (k == "mbs_radius")
                    {
                        m.importance.mbs_radius = Number(x, sub);
                    }
                    else if (k == "target_mean")
                    {
                        m.importance.target_mean = Number(x, sub);
                    }
                    else
                    {
                        return false;
                    }
                    return true;
                });
            }
            else
            {
                return false;
            }
            return true;
        });
    }

    RunConfig& cfg_;
};

/// Runs `check`, turning library validation errors into anchored config errors.
template <typename Check>
void
Anchored(const RunConfig& cfg, const std::string& context, Check&& check)
{
    try
    {
        check();
    }
    catch (const InvalidParameter& e)
    {
        const std::string key = context.empty() ? e.field() : context;
        throw ConfigError(cfg.Where(key), key, context.empty() ? std::string(e.what()).substr(e.field().size() + 2)
                                                               : std::string(e.what()));
    }
    catch (const NonPositiveTxPower& e)
    {
        const std::string key = context.empty() ? "cache.cache_size" : context;
        throw ConfigError(cfg.Where(key), key, e.what());
    }
}

void
ValidatePoint(const RunConfig& cfg, const std::string& context)
{
    Anchored(cfg, context, [&] {
        const SystemParams sys(cfg.system);
        const CacheParams cache(cfg.cache);
        SpectrumPartition{cfg.eta};
        SbsTxPower(sys, cache);
        MbsTxPower(sys, cache);
    });
}

} // namespace

std::vector<double>
RunConfig::AxisValues() const
{
    if (!sweep.values.empty())
    {
        return sweep.values;
    }
    if (sweep.axis == "eta")
    {
        return {eta};
    }
    if (sweep.axis == "cache_size")
    {
        return {static_cast<double>(cache.cache_size)};
    }
    if (sweep.axis == "gamma0_db")
    {
        return {gamma0_db};
    }
    if (sweep.axis == "lambda_m")
    {
        return {system.lambda_m};
    }
    return {cache.zipf_exponent};
}

RunConfig
RunConfig::AtAxis(double value) const
{
    RunConfig out = *this;
    if (sweep.axis == "eta")
    {
        out.eta = value;
    }
    else if (sweep.axis == "cache_size")
    {
        out.cache.cache_size = static_cast<int>(std::lround(value));
    }
    else if (sweep.axis == "gamma0_db")
    {
        out.gamma0_db = value;
    }
    else if (sweep.axis == "lambda_m")
    {
        out.system.lambda_m = value;
    }
    else
    {
        out.cache.zipf_exponent = value;
    }
    return out;
}

std::string
RunConfig::Where(const std::string& key) const
{
    std::string k = key;
    for (;;)
    {
        if (const auto it = positions.find(k); it != positions.end())
        {
            return source + ":" + it->second;
        }
        const auto dot = k.rfind('.');
        if (dot == std::string::npos)
        {
            return source;
        }
        k.resize(dot);
    }
}

RunConfig
ParseConfig(const std::string& text, const std::string& source)
{
    RunConfig cfg;
    cfg.source = source;
    YAML::Node root;
    try
    {
        root = YAML::Load(text);
    }
    catch (const YAML::ParserException& e)
    {
        throw ConfigError(source + ":" + Position(e.mark), "<document>", e.msg);
    }
    Parser(cfg).Document(root);
    return cfg;
}

RunConfig
LoadConfig(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw ConfigError(path, "<document>", "cannot open file");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return ParseConfig(text.str(), path);
}

void
ValidateConfig(const RunConfig& cfg)
{
    ValidatePoint(cfg, "");
    if (!std::isfinite(DbToLinear(cfg.gamma0_db)) || DbToLinear(cfg.gamma0_db) <= 0.0)
    {
        throw ConfigError(cfg.Where("system.gamma0_db"), "system.gamma0_db", "threshold out of range");
    }
    const McSettings& m = cfg.mc;
    if (!(m.r_sim > 0.0))
    {
        throw ConfigError(cfg.Where("mc.r_sim"), "mc.r_sim", "must be > 0");
    }
    if (!(m.los_tail_radius >= 0.0))
    {
        throw ConfigError(cfg.Where("mc.los_tail_radius"), "mc.los_tail_radius", "must be >= 0");
    }
    if (m.importance.sbs_radius < 0.0 || m.importance.mbs_radius < 0.0 || !(m.importance.target_mean > 0.0))
    {
        throw ConfigError(cfg.Where("mc.importance"), "mc.importance",
                          "radii must be >= 0 and target_mean > 0");
    }
    const std::string values_key = cfg.positions.contains("sweep.values") ? "sweep.values" : "sweep";
    for (double v : cfg.AxisValues())
    {
        if (cfg.sweep.axis == "cache_size" && v != std::floor(v))
        {
            throw ConfigError(cfg.Where(values_key), values_key, "cache_size values must be integers");
        }
        if (cfg.sweep.axis == "gamma0_db")
        {
            continue;
        }
        try
        {
            ValidatePoint(cfg.AtAxis(v), values_key);
        }
        catch (const ConfigError& e)
        {
            const std::string what = e.what();
            throw ConfigError(cfg.Where(values_key), values_key,
                              cfg.sweep.axis + " = " + FormatNumber(v) + ": " +
                                  what.substr(what.find(values_key + ": ") + values_key.size() + 2));
        }
    }
}

std::string
EmitResolved(const RunConfig& cfg)
{
    std::ostringstream y;
    const SystemSettings& s = cfg.system;
    y << "system:\n";
    for (const DoubleField& f : kSystemDoubles)
    {
        y << "  " << f.name << ": " << FormatNumber(s.*f.member) << "\n";
    }
    if (const auto* c = std::get_if<ConstantWatts>(&s.noise))
    {
        y << "  noise:\n    model: constant\n    watts: " << FormatNumber(c->watts) << "\n";
    }
    else
    {
        y << "  noise:\n    model: thermal\n    noise_figure_db: "
          << FormatNumber(std::get<ThermalPlusNoiseFigure>(s.noise).noise_figure_db) << "\n";
    }
    y << "  gamma0_db: " << FormatNumber(cfg.gamma0_db) << "\n";
    y << "  pdf_mode: " << (cfg.pdf_mode == PdfMode::kThinned ? "thinned" : "unthinned") << "\n";
    y << "  sbs_cases: " << (cfg.sbs_cases == SbsCaseVariant::kMatched ? "matched" : "all_los") << "\n";

    const CacheSettings& c = cfg.cache;
    y << "cache:\n";
    y << "  library_size: " << c.library_size << "\n";
    y << "  cache_size: " << c.cache_size << "\n";
    y << "  zipf_exponent: " << FormatNumber(c.zipf_exponent) << "\n";
    y << "  w_ca: " << FormatNumber(c.w_ca) << "\n";
    y << "  file_size_bits: " << FormatNumber(c.file_size_bits) << "\n";

    y << "partition:\n  eta: " << FormatNumber(cfg.eta) << "\n";

    const SweepSpec& sw = cfg.sweep;
    y << "sweep:\n  axis: " << sw.axis << "\n  values: [";
    const std::vector<double> values = cfg.AxisValues();
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        y << (i ? ", " : "") << FormatNumber(values[i]);
    }
    y << "]\n  engines: "
      << (sw.engines.size() == 2 ? "both" : std::string(ToString(sw.engines.front()))) << "\n  quantities: [";
    for (std::size_t i = 0; i < sw.quantities.size(); ++i)
    {
        y << (i ? ", " : "") << sw.quantities[i];
    }
    std::string output;
    for (char ch : sw.output)
    {
        output += (ch == '"' || ch == '\\') ? std::string("\\") + ch : std::string(1, ch);
    }
    y << "]\n  output: \"" << output << "\"\n";

    const McSettings& m = cfg.mc;
    y << "mc:\n";
    y << "  realizations: " << m.realizations << "\n";
    y << "  r_sim: " << FormatNumber(m.r_sim) << "\n";
    y << "  los_tail_radius: " << FormatNumber(m.los_tail_radius) << "\n";
    y << "  seed: " << m.seed << "\n";
    y << "  estimator: " << (m.estimator == mc::Estimator::kIndicator ? "indicator" : "conditional") << "\n";
    y << "  importance:\n";
    y << "    sbs_radius: " << FormatNumber(m.importance.sbs_radius) << "\n";
    y << "    mbs_radius: " << FormatNumber(m.importance.mbs_radius) << "\n";
    y << "    target_mean: " << FormatNumber(m.importance.target_mean) << "\n";
    return y.str();
}

} // namespace mabhet::cli
