#include "gomec/inference.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace gomec
{

std::string
ToString(ExecutionMode mode)
{
    switch (mode)
    {
    case ExecutionMode::StandalonePrimary:
        return "standalone_primary";
    case ExecutionMode::StandaloneHelper:
        return "standalone_helper";
    case ExecutionMode::Cooperative:
        return "cooperative";
    }
    return "unknown";
}

double
DegradeAccuracy(double a_clean, double ber, const SyntheticOracleParams& params)
{
    if (params.ber_knee >= params.ber_floor || ber <= params.ber_knee)
    {
        return a_clean;
    }
    if (ber >= params.ber_floor)
    {
        return params.chance_level;
    }
    const double t = (std::log10(ber) - std::log10(params.ber_knee)) /
                     (std::log10(params.ber_floor) - std::log10(params.ber_knee));
    return a_clean + (params.chance_level - a_clean) * t;
}

JointTable
SyntheticJoint(const SyntheticOracleParams& params, double ber)
{
    const double a_p = DegradeAccuracy(params.a_p_clean, ber, params);
    const double a_h = DegradeAccuracy(params.a_h_clean, ber, params);

    // Scale the joint by the degradation of whichever marginal ends up lower.
    const bool primary_weaker = a_p <= a_h;
    const double clean = primary_weaker ? params.a_p_clean : params.a_h_clean;
    const double degraded = primary_weaker ? a_p : a_h;
    const double factor = clean > 0 ? degraded / clean : 1.0;
    double joint = params.joint_clean * factor;

    const double lo = std::max(0.0, a_p + a_h - 1.0);
    const double hi = std::min(a_p, a_h);
    bool clamped = false;
    if (joint < lo || joint > hi)
    {
        joint = std::clamp(joint, lo, hi);
        clamped = true;
    }
    return {joint, a_p - joint, a_h - joint, 1.0 - a_p - a_h + joint, clamped};
}

double
SyntheticSuccessProbability(const SyntheticOracleParams& params, double ber, ExecutionMode mode)
{
    const JointTable t = SyntheticJoint(params, ber);
    switch (mode)
    {
    case ExecutionMode::StandalonePrimary:
        return t.both + t.primary_only;
    case ExecutionMode::StandaloneHelper:
        return t.both + t.helper_only;
    case ExecutionMode::Cooperative:
        return t.both + params.tie_gain * (t.primary_only + t.helper_only);
    }
    return 0.0;
}

namespace
{

InferenceOutcome
Combine(bool theta_p, bool theta_h, bool agg_if_cooperative, ExecutionMode mode)
{
    InferenceOutcome out;
    out.theta_p = theta_p;
    switch (mode)
    {
    case ExecutionMode::StandalonePrimary:
        out.theta_agg = theta_p;
        break;
    case ExecutionMode::StandaloneHelper:
        out.theta_h = theta_h;
        out.theta_agg = theta_h;
        break;
    case ExecutionMode::Cooperative:
        out.theta_h = theta_h;
        out.theta_agg = agg_if_cooperative;
        break;
    }
    return out;
}

} // namespace

InferenceOutcome
SyntheticSample(RngStream& rng, const SyntheticOracleParams& params, double ber, ExecutionMode mode)
{
    const JointTable t = SyntheticJoint(params, ber);
    const double cell = rng.Uniform01();
    const double tie = rng.Uniform01();

    bool theta_p = false;
    bool theta_h = false;
    if (cell <= t.both)
    {
        theta_p = theta_h = true;
    }
    else if (cell <= t.both + t.primary_only)
    {
        theta_p = true;
    }
    else if (cell <= t.both + t.primary_only + t.helper_only)
    {
        theta_h = true;
    }
    const bool agg = theta_p == theta_h ? theta_p : tie <= params.tie_gain;
    InferenceOutcome out = Combine(theta_p, theta_h, agg, mode);
    out.joint_clamped = t.clamped;
    return out;
}

std::size_t
Argmax(std::span<const double> row)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < row.size(); ++i)
    {
        if (row[i] > row[best])
        {
            best = i;
        }
    }
    return best;
}

std::size_t
ScoreSumArgmax(std::span<const double> a, std::span<const double> b)
{
    std::size_t best = 0;
    double best_score = a[0] + b[0];
    for (std::size_t i = 1; i < a.size(); ++i)
    {
        const double s = a[i] + b[i];
        if (s > best_score)
        {
            best = i;
            best_score = s;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Score files

namespace
{

struct CsvTable
{
    std::vector<std::int64_t> sample_ids;
    std::vector<int> labels;
    std::vector<double> scores;
};

std::vector<std::string_view>
SplitComma(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true)
    {
        const std::size_t pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos)
        {
            return out;
        }
        start = pos + 1;
    }
}

template <typename T>
bool
ParseField(std::string_view field, T& value)
{
    const char* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, value);
    return ec == std::errc{} && ptr == end;
}

CsvTable
ReadScoreCsv(const std::filesystem::path& path, std::size_t num_classes)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ScoreTableError(fmt::format("cannot open score file '{}'", path.string()));
    }
    std::string line;
    if (!std::getline(in, line))
    {
        throw ScoreTableError(fmt::format("'{}': empty file", path.string()));
    }
    if (!line.empty() && line.back() == '\r')
    {
        line.pop_back();
    }
    std::string expected = "sample_id,true_label";
    for (std::size_t c = 0; c < num_classes; ++c)
    {
        expected += fmt::format(",s{}", c);
    }
    if (line != expected)
    {
        throw ScoreTableError(fmt::format("'{}': header must be '{}'", path.string(), expected));
    }

    CsvTable t;
    std::size_t lineno = 1;
    while (std::getline(in, line))
    {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
        {
            line.pop_back();
        }
        if (line.empty())
        {
            continue;
        }
        const auto fields = SplitComma(line);
        if (fields.size() != num_classes + 2)
        {
            throw ScoreTableError(fmt::format("'{}':{}: expected {} fields, got {}",
                                              path.string(), lineno, num_classes + 2, fields.size()));
        }
        std::int64_t id = 0;
        int label = 0;
        if (!ParseField(fields[0], id) || !ParseField(fields[1], label))
        {
            throw ScoreTableError(fmt::format("'{}':{}: bad sample_id or true_label", path.string(), lineno));
        }
        t.sample_ids.push_back(id);
        t.labels.push_back(label);
        for (std::size_t c = 0; c < num_classes; ++c)
        {
            double s = 0.0;
            if (!ParseField(fields[c + 2], s))
            {
                throw ScoreTableError(fmt::format("'{}':{}: bad score '{}'", path.string(), lineno, fields[c + 2]));
            }
            t.scores.push_back(s);
        }
    }
    return t;
}

} // namespace

ScoreTableSet::ScoreTableSet(std::size_t num_classes,
                             std::vector<std::int64_t> sample_ids,
                             std::vector<int> labels,
                             std::vector<ScoreGridPoint> grid)
    : m_num_classes(num_classes),
      m_sample_ids(std::move(sample_ids)),
      m_labels(std::move(labels)),
      m_grid(std::move(grid))
{
    Check();
}

void
ScoreTableSet::Check() const
{
    if (m_num_classes < 2)
    {
        throw ScoreTableError("score tables need at least two classes");
    }
    if (m_labels.empty() || m_labels.size() != m_sample_ids.size())
    {
        throw ScoreTableError("score tables need a non-empty, consistent sample list");
    }
    if (!std::is_sorted(m_sample_ids.begin(), m_sample_ids.end()) ||
        std::adjacent_find(m_sample_ids.begin(), m_sample_ids.end()) != m_sample_ids.end())
    {
        throw ScoreTableError("sample ids must be strictly increasing");
    }
    for (int label : m_labels)
    {
        if (label < 0 || static_cast<std::size_t>(label) >= m_num_classes)
        {
            throw ScoreTableError(fmt::format("true label {} outside [0, {})", label, m_num_classes));
        }
    }
    if (m_grid.empty())
    {
        throw ScoreTableError("score tables need at least one BER grid point");
    }
    if (std::count_if(m_grid.begin(), m_grid.end(), [](const ScoreGridPoint& g) { return g.clean; }) != 1)
    {
        throw ScoreTableError("exactly one grid point must be marked clean");
    }
    const std::size_t cells = m_num_classes * m_labels.size();
    for (const ScoreGridPoint& g : m_grid)
    {
        if (g.clean ? g.ber != 0.0 : !(g.ber > 0 && g.ber <= 1))
        {
            throw ScoreTableError(fmt::format("grid BER {} invalid (clean entry must be 0, others in (0, 1])", g.ber));
        }
        for (const ScoreTable* t : {&g.primary, &g.helper})
        {
            if (t->scores.size() != cells)
            {
                throw ScoreTableError(fmt::format("classifier '{}' at BER {}: expected {} scores, got {}",
                                                  t->classifier_id, g.ber, cells, t->scores.size()));
            }
            for (std::size_t i = 0; i < m_labels.size(); ++i)
            {
                double sum = 0.0;
                for (double s : Row(*t, i))
                {
                    sum += s;
                }
                if (std::abs(sum - 1.0) > 1e-5)
                {
                    throw ScoreTableError(fmt::format("classifier '{}' at BER {}: row {} sums to {}",
                                                      t->classifier_id, g.ber, m_sample_ids[i], sum));
                }
            }
        }
    }
}

ScoreTableSet
ScoreTableSet::Load(const std::string& manifest_path)
{
    using nlohmann::json;
    namespace fs = std::filesystem;

    std::ifstream in(manifest_path);
    if (!in)
    {
        throw ScoreTableError(fmt::format("cannot open score manifest '{}'", manifest_path));
    }
    json doc;
    try
    {
        doc = json::parse(in);
    }
    catch (const json::parse_error& e)
    {
        throw ScoreTableError(fmt::format("'{}': {}", manifest_path, e.what()));
    }

    const fs::path base = fs::path(manifest_path).parent_path();
    try
    {
        const std::size_t num_classes = doc.at("n_classes").get<std::size_t>();
        const auto ids = doc.at("classifiers").get<std::vector<std::string>>();
        if (ids.size() != 2)
        {
            throw ScoreTableError("manifest must list exactly two classifiers (primary, helper)");
        }

        std::optional<CsvTable> reference;
        std::vector<ScoreGridPoint> grid;
        for (const json& entry : doc.at("grid"))
        {
            ScoreGridPoint point;
            point.ber = entry.at("ber").get<double>();
            point.clean = entry.value("clean", false);
            const json& files = entry.at("files");
            for (std::size_t k = 0; k < 2; ++k)
            {
                CsvTable t = ReadScoreCsv(base / files.at(ids[k]).get<std::string>(), num_classes);
                if (!reference)
                {
                    reference = t;
                }
                else if (t.sample_ids != reference->sample_ids || t.labels != reference->labels)
                {
                    throw ScoreTableError(fmt::format("classifier '{}' at BER {}: sample ids or labels differ",
                                                      ids[k], point.ber));
                }
                ScoreTable& dst = k == 0 ? point.primary : point.helper;
                dst.classifier_id = ids[k];
                dst.scores = std::move(t.scores);
            }
            grid.push_back(std::move(point));
        }
        if (!reference)
        {
            throw ScoreTableError("manifest has an empty grid");
        }
        return ScoreTableSet(num_classes, reference->sample_ids, reference->labels, std::move(grid));
    }
    catch (const json::exception& e)
    {
        throw ScoreTableError(fmt::format("'{}': malformed manifest: {}", manifest_path, e.what()));
    }
}

std::size_t
ScoreTableSet::NearestGridIndex(double ber) const
{
    const double target = std::log10(ber);
    std::size_t best = 0;
    double best_dist = kInfinite;
    bool found = false;
    for (std::size_t i = 0; i < m_grid.size(); ++i)
    {
        if (m_grid[i].ber <= 0)
        {
            continue;
        }
        const double d = std::abs(std::log10(m_grid[i].ber) - target);
        if (!found || d < best_dist)
        {
            best = i;
            best_dist = d;
            found = true;
        }
    }
    if (!found)
    {
        for (std::size_t i = 0; i < m_grid.size(); ++i)
        {
            if (m_grid[i].clean)
            {
                return i;
            }
        }
    }
    return best;
}

std::span<const double>
ScoreTableSet::Row(const ScoreTable& table, std::size_t sample) const
{
    return std::span<const double>(table.scores).subspan(sample * m_num_classes, m_num_classes);
}

double
ScoreTableSet::Accuracy(std::size_t grid_index, ExecutionMode mode) const
{
    const ScoreGridPoint& g = m_grid.at(grid_index);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < m_labels.size(); ++i)
    {
        std::size_t pred = 0;
        switch (mode)
        {
        case ExecutionMode::StandalonePrimary:
            pred = Argmax(Row(g.primary, i));
            break;
        case ExecutionMode::StandaloneHelper:
            pred = Argmax(Row(g.helper, i));
            break;
        case ExecutionMode::Cooperative:
            pred = ScoreSumArgmax(Row(g.primary, i), Row(g.helper, i));
            break;
        }
        correct += pred == static_cast<std::size_t>(m_labels[i]);
    }
    return static_cast<double>(correct) / static_cast<double>(m_labels.size());
}

InferenceOutcome
EmpiricalSample(RngStream& rng, const ScoreTableSet& tables, double ber, ExecutionMode mode)
{
    const ScoreGridPoint& g = tables.Grid()[tables.NearestGridIndex(ber)];
    const std::size_t i = rng.UniformIndex(tables.NumSamples());
    const auto label = static_cast<std::size_t>(tables.Labels()[i]);
    const auto row_p = tables.Row(g.primary, i);
    const auto row_h = tables.Row(g.helper, i);
    const bool theta_p = Argmax(row_p) == label;
    const bool theta_h = Argmax(row_h) == label;
    const bool agg = ScoreSumArgmax(row_p, row_h) == label;
    return Combine(theta_p, theta_h, agg, mode);
}

InferenceOutcome
PerfectOracle::Sample(RngStream&, double, ExecutionMode mode) const
{
    return Combine(true, true, true, mode);
}

InferenceOutcome
SyntheticOracle::Sample(RngStream& rng, double ber, ExecutionMode mode) const
{
    return SyntheticSample(rng, m_params, ber, mode);
}

InferenceOutcome
EmpiricalOracle::Sample(RngStream& rng, double ber, ExecutionMode mode) const
{
    return EmpiricalSample(rng, m_tables, ber, mode);
}

std::shared_ptr<const InferenceOracle>
MakeOracle(const OracleConfig& cfg)
{
    switch (cfg.kind)
    {
    case OracleKind::Perfect:
        return std::make_shared<PerfectOracle>();
    case OracleKind::Synthetic:
        return std::make_shared<SyntheticOracle>(cfg.synthetic);
    case OracleKind::Empirical:
        return std::make_shared<EmpiricalOracle>(ScoreTableSet::Load(cfg.manifest));
    }
    return nullptr;
}

} // namespace gomec
