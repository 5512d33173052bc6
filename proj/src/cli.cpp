#include "gomec/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

namespace gomec::cli
{

const std::vector<std::string>&
StatsColumns()
{
    static const std::vector<std::string> columns{
        "mode",
        "trials",
        "effectiveness",
        "effectiveness_ci_low",
        "effectiveness_ci_high",
        "mean_device_energy",
        "mean_device_energy_goal_met",
        "mean_mec_energy",
        "delay_outage_rate",
        "inference_outage_rate",
        "best_effort_rate",
        "cooperative_rate",
        "helper_only_rate",
        "energy_capped_rate",
        "inexact_inversion_rate",
    };
    return columns;
}

std::string
ParameterColumn(const std::string& path)
{
    const auto dot = path.rfind('.');
    return dot == std::string::npos ? path : path.substr(dot + 1);
}

namespace
{

std::string
Num(double v)
{
    return fmt::format("{:.9g}", v);
}

} // namespace

std::string
CsvHeader(const std::string& parameter_column)
{
    std::string line = parameter_column;
    for (const std::string& c : StatsColumns())
    {
        if (!line.empty())
        {
            line += ',';
        }
        line += c;
    }
    return line;
}

std::string
CsvRow(const std::string& value_cell, InferenceMode mode, const CampaignStats& s)
{
    std::vector<std::string> cells{
        ToString(mode),
        std::to_string(s.trials),
        Num(s.effectiveness),
        Num(s.ci_low),
        Num(s.ci_high),
        Num(s.mean_device_energy),
        Num(s.mean_device_energy_goal_met),
        Num(s.mean_mec_energy),
        Num(s.delay_outage_rate),
        Num(s.inference_outage_rate),
        Num(s.best_effort_rate),
        Num(s.cooperative_rate),
        Num(s.helper_only_rate),
        Num(s.energy_capped_rate),
        Num(s.inexact_inversion_rate),
    };
    std::string line = value_cell;
    for (const std::string& c : cells)
    {
        if (!line.empty())
        {
            line += ',';
        }
        line += c;
    }
    return line;
}

void
WriteSweepCsv(std::ostream& out, std::vector<SweepRow> rows)
{
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.value != b.value)
        {
            return a.value < b.value;
        }
        return static_cast<int>(a.mode) < static_cast<int>(b.mode);
    });
    const std::string column = rows.empty() ? "value" : ParameterColumn(rows.front().parameter);
    out << CsvHeader(column) << '\n';
    for (const SweepRow& r : rows)
    {
        out << CsvRow(Num(r.value), r.mode, r.stats) << '\n';
    }
}

void
WriteRunCsv(std::ostream& out, InferenceMode mode, const CampaignStats& stats)
{
    out << CsvHeader("") << '\n' << CsvRow("", mode, stats) << '\n';
}

std::vector<double>
ParseValueList(const std::string& text)
{
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (item.empty())
        {
            throw ConfigError(fmt::format("empty entry in value list '{}'", text));
        }
        std::size_t used = 0;
        double v = 0.0;
        try
        {
            v = std::stod(item, &used);
        }
        catch (const std::exception&)
        {
            used = 0;
        }
        if (used != item.size())
        {
            throw ConfigError(fmt::format("'{}' is not a number", item));
        }
        values.push_back(v);
    }
    if (values.empty())
    {
        throw ConfigError("empty value list");
    }
    return values;
}

SweepSpec
LoadSweepSpec(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError(fmt::format("cannot open sweep file '{}'", path));
    }
    SweepSpec spec;
    try
    {
        const nlohmann::json doc = nlohmann::json::parse(in);
        for (const auto& [key, value] : doc.items())
        {
            if (key != "parameter" && key != "values" && key != "modes" && key != "common_random_numbers")
            {
                throw ConfigError(fmt::format("'{}': unknown key '{}'", path, key));
            }
        }
        spec.parameter = doc.at("parameter").get<std::string>();
        spec.values = doc.at("values").get<std::vector<double>>();
        for (const std::string& m : doc.value("modes", std::vector<std::string>{"standalone", "ensemble"}))
        {
            auto mode = ParseInferenceMode(m);
            if (!mode)
            {
                throw ConfigError(fmt::format("'{}': unknown mode '{}'", path, m));
            }
            spec.modes.push_back(*mode);
        }
        spec.common_random_numbers = doc.value("common_random_numbers", true);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw ConfigError(fmt::format("'{}': {}", path, e.what()));
    }
    return spec;
}

namespace
{

struct Options
{
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> trials;
    std::string mode;
    std::string sweep_param;
    std::string sweep_values;
    std::string sweep_file;
    unsigned workers = 0;
};

ScenarioConfig
LoadBase(const Options& opt)
{
    ScenarioConfig cfg = opt.config.empty() ? DefaultScenario() : LoadConfig(opt.config);
    if (opt.seed)
    {
        cfg.seed = *opt.seed;
    }
    if (opt.trials)
    {
        cfg.trials = *opt.trials;
    }
    return cfg;
}

void
PrintViolations(std::ostream& err, const std::vector<Violation>& violations)
{
    for (const Violation& v : violations)
    {
        err << "  " << v.path << ": " << v.message << '\n';
    }
}

void
PrintSummary(std::ostream& os, const ScenarioConfig& cfg, const CampaignStats& s)
{
    os << fmt::format("mode {}  trials {}  seed {}  ber {:g}\n", ToString(cfg.mode), s.trials, cfg.seed,
                      cfg.radio.ber_target);
    os << fmt::format("  goal effectiveness   {:.4f}  (95% CI {:.4f} .. {:.4f})\n", s.effectiveness, s.ci_low,
                      s.ci_high);
    os << fmt::format("  device energy        {:.4e} J  (goal met: {:.4e} J)\n", s.mean_device_energy,
                      s.mean_device_energy_goal_met);
    os << fmt::format("  MEC energy           {:.4e} J per request\n", s.mean_mec_energy);
    os << fmt::format("  delay outage {:.4f}  inference outage {:.4f}  best effort {:.4f}  cooperative {:.4f}\n",
                      s.delay_outage_rate, s.inference_outage_rate, s.best_effort_rate, s.cooperative_rate);
}

/// Writes to the --out file, or to @p fallback when no file was given.
template <typename Fn>
void
Emit(const std::string& path, std::ostream& fallback, Fn&& write)
{
    if (path.empty())
    {
        write(fallback);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
    {
        throw std::runtime_error(fmt::format("cannot write '{}'", path));
    }
    write(f);
    if (!f)
    {
        throw std::runtime_error(fmt::format("error while writing '{}'", path));
    }
}

int
CmdRun(const Options& opt, std::ostream& out, std::ostream& err)
{
    ScenarioConfig cfg = LoadBase(opt);
    if (!opt.mode.empty())
    {
        cfg.mode = *ParseInferenceMode(opt.mode);
    }
    const CampaignStats stats = Campaign(cfg).Run(opt.workers);
    if (opt.out.empty())
    {
        WriteRunCsv(out, cfg.mode, stats);
        PrintSummary(err, cfg, stats);
    }
    else
    {
        Emit(opt.out, out, [&](std::ostream& os) { WriteRunCsv(os, cfg.mode, stats); });
        PrintSummary(out, cfg, stats);
    }
    return kExitOk;
}

int
CmdSweep(const Options& opt, std::ostream& out, std::ostream& err)
{
    ScenarioConfig cfg = LoadBase(opt);
    SweepSpec spec;
    if (!opt.sweep_file.empty())
    {
        spec = LoadSweepSpec(opt.sweep_file);
    }
    if (!opt.sweep_param.empty())
    {
        spec.parameter = opt.sweep_param;
    }
    if (!opt.sweep_values.empty())
    {
        spec.values = ParseValueList(opt.sweep_values);
    }
    if (spec.parameter.empty() || spec.values.empty())
    {
        throw ConfigError("sweep needs --sweep-param and --sweep-values (or --sweep-file)");
    }
    if (!opt.mode.empty())
    {
        spec.modes = {*ParseInferenceMode(opt.mode)};
    }
    else if (spec.modes.empty())
    {
        spec.modes = {InferenceMode::Standalone, InferenceMode::Ensemble};
    }

    const std::vector<SweepRow> rows = RunSweep(cfg, spec, opt.workers);
    Emit(opt.out, out, [&](std::ostream& os) { WriteSweepCsv(os, rows); });
    err << fmt::format("{} rows ({} values x {} modes) for {}\n", rows.size(), spec.values.size(),
                       spec.modes.size(), spec.parameter);
    return kExitOk;
}

int
CmdValidate(const Options& opt, std::ostream& out, std::ostream&)
{
    ScenarioConfig cfg = LoadBase(opt);
    out << (opt.config.empty() ? std::string("<defaults>") : opt.config) << ": valid\n";
    if (cfg.oracle.kind == OracleKind::Empirical)
    {
        const ScoreTableSet tables = ScoreTableSet::Load(cfg.oracle.manifest);
        out << fmt::format("score tables: {} samples, {} classes, {} grid points\n", tables.NumSamples(),
                           tables.NumClasses(), tables.Grid().size());
    }
    return kExitOk;
}

} // namespace

int
Main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Monte Carlo simulator of goal-oriented edge inference over a MEC network"};
    app.require_subcommand(1);
    Options opt;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "scenario JSON (built-in defaults when omitted)");
        sub->add_option("--seed", opt.seed, "master seed override");
        sub->add_option("--trials", opt.trials, "trial count override")->check(CLI::PositiveNumber);
    };

    CLI::App* run = app.add_subcommand("run", "run one campaign");
    common(run);
    run->add_option("--out", opt.out, "CSV output path (stdout when omitted)");
    run->add_option("--mode", opt.mode, "standalone or ensemble")->check(CLI::IsMember({"standalone", "ensemble"}));
    run->add_option("--workers", opt.workers, "worker threads (0 = all cores)");

    CLI::App* sweep = app.add_subcommand("sweep", "run one campaign per (value, mode)");
    common(sweep);
    sweep->add_option("--out", opt.out, "CSV output path (stdout when omitted)");
    sweep->add_option("--mode", opt.mode, "restrict to one mode (default: both)")
        ->check(CLI::IsMember({"standalone", "ensemble"}));
    sweep->add_option("--sweep-param", opt.sweep_param, "dotted config path, e.g. radio.ber_target or mehs.beta_max");
    sweep->add_option("--sweep-values", opt.sweep_values, "comma-separated values");
    sweep->add_option("--sweep-file", opt.sweep_file, "JSON sweep specification");
    sweep->add_option("--workers", opt.workers, "worker threads (0 = all cores)");

    CLI::App* validate = app.add_subcommand("validate", "check a configuration");
    common(validate);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp&)
    {
        out << app.help();
        return kExitOk;
    }
    catch (const CLI::ParseError& e)
    {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try
    {
        if (run->parsed())
        {
            return CmdRun(opt, out, err);
        }
        if (sweep->parsed())
        {
            return CmdSweep(opt, out, err);
        }
        return CmdValidate(opt, out, err);
    }
    catch (const ConfigError& e)
    {
        err << "error: " << e.what() << '\n';
        PrintViolations(err, e.Violations());
        return kExitUsage;
    }
    catch (const ScoreTableError& e)
    {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

} // namespace gomec::cli
