#include "gomec/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace gomec
{

using nlohmann::json;

double
DbmToWatt(double dbm)
{
    return std::pow(10.0, dbm / 10.0) * 1e-3;
}

double
WattToDbm(double watt)
{
    return 10.0 * std::log10(watt / 1e-3);
}

ScenarioConfig
DefaultScenario()
{
    ScenarioConfig cfg;
    cfg.radio.noise_psd = DbmToWatt(-174.0);
    cfg.radio.p_max = DbmToWatt(20.0);
    cfg.helper = MehConfig{};
    return cfg;
}

RadioConfig
DeviceRadio(const ScenarioConfig& cfg)
{
    RadioConfig r = cfg.radio;
    r.bandwidth /= cfg.num_devices;
    return r;
}

MehConfig
DeviceMeh(const MehConfig& meh, int num_devices)
{
    MehConfig m = meh;
    m.alpha /= num_devices;
    return m;
}

std::string
ToString(InferenceMode mode)
{
    return mode == InferenceMode::Standalone ? "standalone" : "ensemble";
}

std::optional<InferenceMode>
ParseInferenceMode(const std::string& s)
{
    if (s == "standalone")
    {
        return InferenceMode::Standalone;
    }
    if (s == "ensemble")
    {
        return InferenceMode::Ensemble;
    }
    return std::nullopt;
}

namespace
{

void
Check(std::vector<Violation>& out, bool ok, const std::string& path, const std::string& msg)
{
    if (!ok)
    {
        out.push_back({path, msg});
    }
}

void
ValidateMeh(const MehConfig& m, const std::string& p, std::vector<Violation>& out)
{
    Check(out, m.f_max > 0 && std::isfinite(m.f_max), p + ".f_max_hz", "must be > 0");
    Check(out, m.kappa > 0 && std::isfinite(m.kappa), p + ".kappa", "must be > 0");
    Check(out, m.alpha > 0 && m.alpha <= 1, p + ".alpha", "must lie in (0, 1]");
    Check(out, m.beta_max > 0 && m.beta_max <= 1, p + ".beta_max", "must lie in (0, 1]");
    Check(out,
          m.workload_cycles >= 1 && std::isfinite(m.workload_cycles),
          p + ".workload_cycles",
          "must be >= 1");
}

} // namespace

std::vector<Violation>
Validate(const ScenarioConfig& cfg)
{
    std::vector<Violation> out;
    const RadioConfig& r = cfg.radio;
    Check(out, r.carrier_freq > 0, "radio.carrier_freq_hz", "must be > 0");
    Check(out, r.bandwidth > 0 && std::isfinite(r.bandwidth), "radio.bandwidth_hz", "must be > 0");
    Check(out, r.noise_psd > 0 && std::isfinite(r.noise_psd), "radio.noise_psd_w_per_hz", "must be > 0");
    Check(out, r.p_max > 0 && std::isfinite(r.p_max), "radio.p_max_w", "must be > 0");
    Check(out, r.n_bits >= 1 && std::isfinite(r.n_bits), "radio.n_bits", "must be >= 1");
    Check(out, r.ber_target > 0 && r.ber_target <= 0.1, "radio.ber_target", "must lie in (0, 0.1]");
    Check(out, r.min_distance > 0, "radio.min_distance_m", "must be > 0");
    Check(out, r.min_distance < r.cell_radius, "radio.cell_radius_m", "must exceed min_distance_m");
    if (r.fixed_distance)
    {
        Check(out,
              *r.fixed_distance >= r.min_distance && *r.fixed_distance <= r.cell_radius,
              "radio.fixed_distance_m",
              "must lie in [min_distance_m, cell_radius_m]");
    }
    Check(out, r.shadowing_std_db >= 0, "radio.shadowing_std_db", "must be >= 0");

    ValidateMeh(cfg.primary, "primary", out);
    if (cfg.helper)
    {
        ValidateMeh(*cfg.helper, "helper", out);
    }
    Check(out, cfg.backhaul.rtt >= 0 && std::isfinite(cfg.backhaul.rtt), "backhaul.rtt_s", "must be >= 0");
    Check(out, cfg.goal.d_max > 0 && std::isfinite(cfg.goal.d_max), "goal.d_max_s", "must be > 0");
    Check(out, cfg.num_devices >= 1, "num_devices", "must be >= 1");
    Check(out, cfg.trials >= 1, "trials", "must be >= 1");

    if (cfg.mode == InferenceMode::Ensemble)
    {
        Check(out, cfg.helper.has_value(), "helper", "ensemble mode requires a helper MEH");
        Check(out, cfg.backhaul.helper_present, "backhaul.helper_present", "ensemble mode requires a helper MEH");
    }

    const OracleConfig& o = cfg.oracle;
    if (o.kind == OracleKind::Synthetic)
    {
        const SyntheticOracleParams& s = o.synthetic;
        auto unit = [](double v) { return v >= 0 && v <= 1; };
        Check(out, unit(s.a_p_clean), "oracle.synthetic.a_p_clean", "must lie in [0, 1]");
        Check(out, unit(s.a_h_clean), "oracle.synthetic.a_h_clean", "must lie in [0, 1]");
        Check(out,
              s.joint_clean >= std::max(0.0, s.a_p_clean + s.a_h_clean - 1.0) - 1e-12 &&
                  s.joint_clean <= std::min(s.a_p_clean, s.a_h_clean) + 1e-12,
              "oracle.synthetic.joint_clean",
              "must lie in the Frechet interval [max(0, a_p + a_h - 1), min(a_p, a_h)]");
        Check(out, unit(s.tie_gain), "oracle.synthetic.tie_gain", "must lie in [0, 1]");
        Check(out, unit(s.chance_level), "oracle.synthetic.chance_level", "must lie in [0, 1]");
        Check(out, s.ber_knee > 0, "oracle.synthetic.ber_knee", "must be > 0");
        Check(out, s.ber_knee <= s.ber_floor, "oracle.synthetic.ber_floor", "must be >= ber_knee");
    }
    else if (o.kind == OracleKind::Empirical)
    {
        Check(out, !o.manifest.empty(), "oracle.manifest", "empirical oracle needs a manifest path");
    }
    return out;
}

namespace
{

/// Walks one JSON object, recording which keys were consumed so that the
/// leftovers can be reported as unknown.
class ObjectReader
{
  public:
    ObjectReader(const json& obj, std::string path, std::vector<Violation>& out)
        : m_obj(obj),
          m_path(std::move(path)),
          m_out(out)
    {
        m_ok = obj.is_object();
        if (!m_ok)
        {
            m_out.push_back({m_path.empty() ? "<root>" : m_path, "must be an object"});
        }
    }

    ~ObjectReader()
    {
        if (!m_ok)
        {
            return;
        }
        for (const auto& [key, value] : m_obj.items())
        {
            if (!m_seen.count(key))
            {
                m_out.push_back({Join(key), "unknown key"});
            }
        }
    }

    ObjectReader(const ObjectReader&) = delete;
    ObjectReader& operator=(const ObjectReader&) = delete;

    bool Ok() const
    {
        return m_ok;
    }

    std::string Join(const std::string& key) const
    {
        return m_path.empty() ? key : m_path + "." + key;
    }

    const json* Find(const std::string& key)
    {
        if (!m_ok)
        {
            return nullptr;
        }
        m_seen.insert(key);
        auto it = m_obj.find(key);
        return it == m_obj.end() ? nullptr : &*it;
    }

    void Number(const std::string& key, double& dst)
    {
        if (const json* v = Find(key))
        {
            if (v->is_number())
            {
                dst = v->get<double>();
            }
            else
            {
                m_out.push_back({Join(key), "must be a number"});
            }
        }
    }

    /// Reads either the SI key or its human-unit twin, converting the latter.
    template <typename Convert>
    void Unit(const std::string& si_key, const std::string& human_key, Convert convert, double& dst)
    {
        const json* si = Find(si_key);
        const json* human = Find(human_key);
        if (si && human)
        {
            m_out.push_back({Join(human_key), "conflicts with " + Join(si_key)});
            return;
        }
        if (si)
        {
            Number(si_key, dst);
        }
        else if (human)
        {
            double raw = 0.0;
            const std::size_t before = m_out.size();
            Number(human_key, raw);
            if (m_out.size() == before)
            {
                dst = convert(raw);
            }
        }
    }

    void Bool(const std::string& key, bool& dst)
    {
        if (const json* v = Find(key))
        {
            if (v->is_boolean())
            {
                dst = v->get<bool>();
            }
            else
            {
                m_out.push_back({Join(key), "must be a boolean"});
            }
        }
    }

    void String(const std::string& key, std::string& dst)
    {
        if (const json* v = Find(key))
        {
            if (v->is_string())
            {
                dst = v->get<std::string>();
            }
            else
            {
                m_out.push_back({Join(key), "must be a string"});
            }
        }
    }

    template <typename Int>
    void Integer(const std::string& key, Int& dst)
    {
        if (const json* v = Find(key))
        {
            if (v->is_number_integer())
            {
                dst = v->get<Int>();
            }
            else
            {
                m_out.push_back({Join(key), "must be an integer"});
            }
        }
    }

    std::vector<Violation>& Out()
    {
        return m_out;
    }

  private:
    const json& m_obj;
    std::string m_path;
    std::vector<Violation>& m_out;
    std::set<std::string> m_seen;
    bool m_ok = false;
};

void
ReadMeh(const json& j, const std::string& path, MehConfig& m, std::vector<Violation>& out)
{
    ObjectReader r(j, path, out);
    r.Unit("f_max_hz", "f_max_ghz", [](double v) { return v * 1e9; }, m.f_max);
    r.Number("kappa", m.kappa);
    r.Number("alpha", m.alpha);
    r.Number("beta_max", m.beta_max);
    r.Bool("beta_deterministic", m.beta_deterministic);
    r.Number("workload_cycles", m.workload_cycles);
}

void
ReadRadio(const json& j, RadioConfig& radio, std::vector<Violation>& out)
{
    ObjectReader r(j, "radio", out);
    r.Unit("carrier_freq_hz", "carrier_freq_ghz", [](double v) { return v * 1e9; }, radio.carrier_freq);
    r.Unit("bandwidth_hz", "bandwidth_mhz", [](double v) { return v * 1e6; }, radio.bandwidth);
    r.Unit("noise_psd_w_per_hz", "noise_psd_dbm_per_hz", DbmToWatt, radio.noise_psd);
    r.Unit("p_max_w", "p_max_dbm", DbmToWatt, radio.p_max);
    r.Number("n_bits", radio.n_bits);
    r.Number("ber_target", radio.ber_target);
    r.Number("cell_radius_m", radio.cell_radius);
    r.Number("min_distance_m", radio.min_distance);
    if (const json* pl = r.Find("pathloss"))
    {
        ObjectReader p(*pl, "radio.pathloss", out);
        p.Number("a_db", radio.pathloss.a_db);
        p.Number("b_db", radio.pathloss.b_db);
        p.Number("c_db", radio.pathloss.c_db);
    }
    std::string fading = radio.fading == FadingModel::Rayleigh ? "rayleigh" : "none";
    r.String("fading", fading);
    if (fading == "rayleigh")
    {
        radio.fading = FadingModel::Rayleigh;
    }
    else if (fading == "none")
    {
        radio.fading = FadingModel::None;
    }
    else
    {
        out.push_back({"radio.fading", "must be \"rayleigh\" or \"none\""});
    }
    if (const json* d = r.Find("fixed_distance_m"))
    {
        if (d->is_null())
        {
            radio.fixed_distance.reset();
        }
        else if (d->is_number())
        {
            radio.fixed_distance = d->get<double>();
        }
        else
        {
            out.push_back({"radio.fixed_distance_m", "must be a number or null"});
        }
    }
    r.Number("shadowing_std_db", radio.shadowing_std_db);
}

void
ReadOracle(const json& j, OracleConfig& o, std::vector<Violation>& out)
{
    ObjectReader r(j, "oracle", out);
    std::string kind = o.kind == OracleKind::Perfect     ? "perfect"
                       : o.kind == OracleKind::Synthetic ? "synthetic"
                                                         : "empirical";
    r.String("kind", kind);
    if (kind == "perfect")
    {
        o.kind = OracleKind::Perfect;
    }
    else if (kind == "synthetic")
    {
        o.kind = OracleKind::Synthetic;
    }
    else if (kind == "empirical")
    {
        o.kind = OracleKind::Empirical;
    }
    else
    {
        out.push_back({"oracle.kind", "must be one of perfect, synthetic, empirical"});
    }
    if (const json* s = r.Find("synthetic"))
    {
        ObjectReader sr(*s, "oracle.synthetic", out);
        SyntheticOracleParams& p = o.synthetic;
        sr.Number("a_p_clean", p.a_p_clean);
        sr.Number("a_h_clean", p.a_h_clean);
        sr.Number("joint_clean", p.joint_clean);
        sr.Number("tie_gain", p.tie_gain);
        sr.Number("ber_knee", p.ber_knee);
        sr.Number("ber_floor", p.ber_floor);
        sr.Number("chance_level", p.chance_level);
    }
    r.String("manifest", o.manifest);
}

json
MehToJson(const MehConfig& m)
{
    return json{{"f_max_hz", m.f_max},
                {"kappa", m.kappa},
                {"alpha", m.alpha},
                {"beta_max", m.beta_max},
                {"beta_deterministic", m.beta_deterministic},
                {"workload_cycles", m.workload_cycles}};
}

} // namespace

ScenarioConfig
ConfigFromJson(const json& doc, std::vector<Violation>& violations)
{
    ScenarioConfig cfg = DefaultScenario();
    ObjectReader root(doc, "", violations);
    if (!root.Ok())
    {
        return cfg;
    }

    std::string mode = ToString(cfg.mode);
    root.String("mode", mode);
    if (auto m = ParseInferenceMode(mode))
    {
        cfg.mode = *m;
    }
    else
    {
        violations.push_back({"mode", "must be \"standalone\" or \"ensemble\""});
    }
    root.Integer("num_devices", cfg.num_devices);
    root.Integer("trials", cfg.trials);
    root.Integer("seed", cfg.seed);

    std::string ci = cfg.ci_method == CiMethod::Normal ? "normal" : "clopper_pearson";
    root.String("ci_method", ci);
    if (ci == "normal")
    {
        cfg.ci_method = CiMethod::Normal;
    }
    else if (ci == "clopper_pearson")
    {
        cfg.ci_method = CiMethod::ClopperPearson;
    }
    else
    {
        violations.push_back({"ci_method", "must be \"normal\" or \"clopper_pearson\""});
    }

    if (const json* r = root.Find("radio"))
    {
        ReadRadio(*r, cfg.radio, violations);
    }
    if (const json* p = root.Find("primary"))
    {
        ReadMeh(*p, "primary", cfg.primary, violations);
    }
    if (const json* h = root.Find("helper"))
    {
        if (h->is_null())
        {
            cfg.helper.reset();
        }
        else
        {
            MehConfig helper = cfg.helper.value_or(MehConfig{});
            ReadMeh(*h, "helper", helper, violations);
            cfg.helper = helper;
        }
    }
    if (const json* b = root.Find("backhaul"))
    {
        ObjectReader br(*b, "backhaul", violations);
        br.Unit("rtt_s", "rtt_ms", [](double v) { return v * 1e-3; }, cfg.backhaul.rtt);
        br.Bool("helper_present", cfg.backhaul.helper_present);
    }
    if (const json* g = root.Find("goal"))
    {
        ObjectReader gr(*g, "goal", violations);
        gr.Unit("d_max_s", "d_max_ms", [](double v) { return v * 1e-3; }, cfg.goal.d_max);
    }
    if (const json* o = root.Find("oracle"))
    {
        ReadOracle(*o, cfg.oracle, violations);
    }
    return cfg;
}

json
ConfigToJson(const ScenarioConfig& cfg)
{
    const RadioConfig& r = cfg.radio;
    json radio{{"carrier_freq_hz", r.carrier_freq},
               {"bandwidth_hz", r.bandwidth},
               {"noise_psd_w_per_hz", r.noise_psd},
               {"p_max_w", r.p_max},
               {"n_bits", r.n_bits},
               {"ber_target", r.ber_target},
               {"cell_radius_m", r.cell_radius},
               {"min_distance_m", r.min_distance},
               {"pathloss", {{"a_db", r.pathloss.a_db}, {"b_db", r.pathloss.b_db}, {"c_db", r.pathloss.c_db}}},
               {"fading", r.fading == FadingModel::Rayleigh ? "rayleigh" : "none"},
               {"fixed_distance_m", r.fixed_distance ? json(*r.fixed_distance) : json(nullptr)},
               {"shadowing_std_db", r.shadowing_std_db}};

    const SyntheticOracleParams& s = cfg.oracle.synthetic;
    json oracle{{"kind",
                 cfg.oracle.kind == OracleKind::Perfect     ? "perfect"
                 : cfg.oracle.kind == OracleKind::Synthetic ? "synthetic"
                                                            : "empirical"},
                {"synthetic",
                 {{"a_p_clean", s.a_p_clean},
                  {"a_h_clean", s.a_h_clean},
                  {"joint_clean", s.joint_clean},
                  {"tie_gain", s.tie_gain},
                  {"ber_knee", s.ber_knee},
                  {"ber_floor", s.ber_floor},
                  {"chance_level", s.chance_level}}},
                {"manifest", cfg.oracle.manifest}};

    return json{{"mode", ToString(cfg.mode)},
                {"num_devices", cfg.num_devices},
                {"trials", cfg.trials},
                {"seed", cfg.seed},
                {"ci_method", cfg.ci_method == CiMethod::Normal ? "normal" : "clopper_pearson"},
                {"radio", radio},
                {"primary", MehToJson(cfg.primary)},
                {"helper", cfg.helper ? MehToJson(*cfg.helper) : json(nullptr)},
                {"backhaul", {{"rtt_s", cfg.backhaul.rtt}, {"helper_present", cfg.backhaul.helper_present}}},
                {"goal", {{"d_max_s", cfg.goal.d_max}}},
                {"oracle", oracle}};
}

ScenarioConfig
LoadConfig(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError(fmt::format("cannot open config file '{}'", path));
    }
    json doc;
    try
    {
        doc = json::parse(in);
    }
    catch (const json::parse_error& e)
    {
        throw ConfigError(fmt::format("'{}': {}", path, e.what()));
    }
    std::vector<Violation> violations;
    ScenarioConfig cfg = ConfigFromJson(doc, violations);
    if (violations.empty())
    {
        violations = Validate(cfg);
    }
    if (!violations.empty())
    {
        throw ConfigError(fmt::format("'{}': invalid configuration", path), std::move(violations));
    }
    return cfg;
}

} // namespace gomec
