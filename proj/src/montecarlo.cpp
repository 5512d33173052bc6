#include "gomec/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include <boost/math/distributions/beta.hpp>
#include <fmt/format.h>

namespace gomec
{

void
CampaignAccumulator::Add(const TrialRecord& r)
{
    const TrialOutcome& o = r.outcome;
    ++trials;
    goal_met += o.goal_met;
    delay_outages += o.delay_outage;
    inference_outages += o.inference_outage;
    best_effort += o.best_effort;
    cooperative += o.mode == ExecutionMode::Cooperative;
    helper_only += o.mode == ExecutionMode::StandaloneHelper;
    energy_capped += r.energy_capped;
    inexact_inversions += !r.plan.best_effort && !r.plan.exact_inversion;
    joint_clamped += o.outcome.joint_clamped;
    device_energy += r.e_device_accounted;
    if (o.goal_met)
    {
        device_energy_goal_met += r.e_device_accounted;
    }
    mec_energy += o.e_meh_p + o.e_meh_h;
}

void
CampaignAccumulator::Merge(const CampaignAccumulator& other)
{
    trials += other.trials;
    goal_met += other.goal_met;
    delay_outages += other.delay_outages;
    inference_outages += other.inference_outages;
    best_effort += other.best_effort;
    cooperative += other.cooperative;
    helper_only += other.helper_only;
    energy_capped += other.energy_capped;
    inexact_inversions += other.inexact_inversions;
    joint_clamped += other.joint_clamped;
    device_energy += other.device_energy;
    device_energy_goal_met += other.device_energy_goal_met;
    mec_energy += other.mec_energy;
}

void
BinomialCi95(std::int64_t successes, std::int64_t trials, CiMethod method, double& lo, double& hi)
{
    const double n = static_cast<double>(trials);
    const double x = static_cast<double>(successes);
    const double p = x / n;
    if (method == CiMethod::Normal)
    {
        const double half = 1.96 * std::sqrt(p * (1.0 - p) / n);
        lo = std::max(0.0, p - half);
        hi = std::min(1.0, p + half);
        return;
    }
    using boost::math::beta_distribution;
    using boost::math::quantile;
    lo = successes == 0 ? 0.0 : quantile(beta_distribution<double>(x, n - x + 1.0), 0.025);
    hi = successes == trials ? 1.0 : quantile(beta_distribution<double>(x + 1.0, n - x), 0.975);
}

CampaignStats
CampaignAccumulator::Finish(CiMethod ci) const
{
    CampaignStats s;
    s.trials = trials;
    s.goal_met = goal_met;
    if (trials == 0)
    {
        return s;
    }
    const double n = static_cast<double>(trials);
    s.effectiveness = static_cast<double>(goal_met) / n;
    BinomialCi95(goal_met, trials, ci, s.ci_low, s.ci_high);
    s.mean_device_energy = device_energy / n;
    s.mean_device_energy_goal_met = goal_met > 0 ? device_energy_goal_met / static_cast<double>(goal_met) : 0.0;
    s.mean_mec_energy = mec_energy / n;
    s.delay_outage_rate = static_cast<double>(delay_outages) / n;
    s.inference_outage_rate = static_cast<double>(inference_outages) / n;
    s.best_effort_rate = static_cast<double>(best_effort) / n;
    s.cooperative_rate = static_cast<double>(cooperative) / n;
    s.helper_only_rate = static_cast<double>(helper_only) / n;
    s.energy_capped_rate = static_cast<double>(energy_capped) / n;
    s.inexact_inversion_rate = static_cast<double>(inexact_inversions) / n;
    s.joint_clamped_rate = static_cast<double>(joint_clamped) / n;
    return s;
}

Campaign::Campaign(ScenarioConfig cfg, std::shared_ptr<const InferenceOracle> oracle)
    : m_cfg(std::move(cfg)),
      m_oracle(std::move(oracle))
{
    auto violations = Validate(m_cfg);
    if (!violations.empty())
    {
        throw ConfigError("invalid configuration", std::move(violations));
    }
    m_radio = DeviceRadio(m_cfg);
    m_primary = DeviceMeh(m_cfg.primary, m_cfg.num_devices);
    if (m_cfg.helper && m_cfg.backhaul.helper_present)
    {
        m_helper = DeviceMeh(*m_cfg.helper, m_cfg.num_devices);
    }
    if (!m_oracle)
    {
        m_oracle = MakeOracle(m_cfg.oracle);
    }
}

TrialRecord
Campaign::Trial(std::int64_t index) const
{
    const auto i = static_cast<std::uint64_t>(index);
    const std::uint64_t seed = m_cfg.seed;
    RngStream distance_rng(seed, i, RngDimension::Distance);
    RngStream fading_rng(seed, i, RngDimension::Fading);
    RngStream shadowing_rng(seed, i, RngDimension::Shadowing);
    RngStream beta_p_rng(seed, i, RngDimension::BetaPrimary);
    RngStream beta_h_rng(seed, i, RngDimension::BetaHelper);
    RngStream inference_rng(seed, i, RngDimension::Inference);

    TrialRecord rec{};
    rec.channel = SampleChannel(distance_rng, fading_rng, shadowing_rng, m_radio);
    rec.draws.h = rec.channel.h;
    rec.draws.primary = SampleBeta(beta_p_rng, m_primary);
    if (m_helper)
    {
        rec.draws.helper = SampleBeta(beta_h_rng, *m_helper);
    }

    const Workloads workloads{m_primary.workload_cycles, m_helper ? m_helper->workload_cycles : 0.0};
    if (m_cfg.mode == InferenceMode::Ensemble)
    {
        rec.plan = PlanEnsemble(m_radio, rec.draws, workloads, m_cfg.backhaul, m_cfg.goal);
    }
    else
    {
        rec.plan = PlanStandalone(m_radio, rec.draws.h, rec.draws.primary, workloads.primary, m_cfg.goal);
    }

    const MehPair mehs{m_primary, m_helper ? &*m_helper : nullptr};
    rec.outcome = EvaluateTrial(rec.plan, m_radio, rec.draws, mehs, workloads, m_cfg.backhaul, m_cfg.goal,
                                *m_oracle, inference_rng);

    const double cap = kEnergyCapFactor * m_cfg.goal.d_max;
    rec.energy_capped = !(rec.outcome.d_u <= cap);
    rec.e_device_accounted = rec.plan.p_tx * std::min(rec.outcome.d_u, cap);
    return rec;
}

CampaignStats
Campaign::Run(unsigned workers) const
{
    const std::int64_t n = m_cfg.trials;
    const std::int64_t blocks = (n + kTrialBlock - 1) / kTrialBlock;
    std::vector<CampaignAccumulator> partial(static_cast<std::size_t>(blocks));

    std::atomic<std::int64_t> next{0};
    auto work = [&] {
        for (std::int64_t b = next++; b < blocks; b = next++)
        {
            CampaignAccumulator acc;
            const std::int64_t end = std::min(n, (b + 1) * kTrialBlock);
            for (std::int64_t i = b * kTrialBlock; i < end; ++i)
            {
                acc.Add(Trial(i));
            }
            partial[static_cast<std::size_t>(b)] = acc;
        }
    };

    if (workers == 0)
    {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = static_cast<unsigned>(std::min<std::int64_t>(workers, blocks));
    if (workers <= 1)
    {
        work();
    }
    else
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
        {
            pool.emplace_back(work);
        }
    }

    CampaignAccumulator total;
    for (const CampaignAccumulator& acc : partial)
    {
        total.Merge(acc);
    }
    return total.Finish(m_cfg.ci_method);
}

CampaignStats
RunCampaign(const ScenarioConfig& cfg, unsigned workers)
{
    return Campaign(cfg).Run(workers);
}

namespace
{

std::vector<std::string>
SplitPath(const std::string& path)
{
    std::vector<std::string> parts;
    std::stringstream ss(path);
    std::string part;
    while (std::getline(ss, part, '.'))
    {
        parts.push_back(part);
    }
    return parts;
}

void
SetLeaf(nlohmann::json& doc, const std::vector<std::string>& parts, double value, const std::string& full)
{
    nlohmann::json* node = &doc;
    for (const std::string& key : parts)
    {
        if (key.empty() || !node->is_object() || !node->contains(key))
        {
            throw ConfigError(fmt::format("sweep parameter '{}' does not resolve in the configuration", full));
        }
        node = &(*node)[key];
    }
    if (node->is_boolean())
    {
        *node = value != 0.0;
    }
    else if (node->is_number_integer())
    {
        if (value != std::floor(value))
        {
            throw ConfigError(fmt::format("sweep parameter '{}' takes integers, got {}", full, value));
        }
        *node = static_cast<std::int64_t>(value);
    }
    else if (node->is_number())
    {
        *node = value;
    }
    else
    {
        throw ConfigError(fmt::format("sweep parameter '{}' is not numeric", full));
    }
}

} // namespace

ScenarioConfig
ApplyParameter(const ScenarioConfig& cfg, const std::string& path, double value)
{
    nlohmann::json doc = ConfigToJson(cfg);
    std::vector<std::string> parts = SplitPath(path);
    if (parts.empty())
    {
        throw ConfigError("empty sweep parameter");
    }
    if (parts.front() == "mehs")
    {
        parts.front() = "primary";
        SetLeaf(doc, parts, value, path);
        if (!doc["helper"].is_null())
        {
            parts.front() = "helper";
            SetLeaf(doc, parts, value, path);
        }
    }
    else
    {
        SetLeaf(doc, parts, value, path);
    }

    std::vector<Violation> violations;
    ScenarioConfig out = ConfigFromJson(doc, violations);
    if (violations.empty())
    {
        violations = Validate(out);
    }
    if (!violations.empty())
    {
        throw ConfigError(fmt::format("sweep point {}={} is invalid", path, value), std::move(violations));
    }
    return out;
}

std::vector<SweepRow>
RunSweep(const ScenarioConfig& base, const SweepSpec& sweep, unsigned workers)
{
    if (sweep.values.empty())
    {
        throw ConfigError("sweep needs at least one value");
    }
    if (sweep.modes.empty())
    {
        throw ConfigError("sweep needs at least one mode");
    }

    std::vector<ScenarioConfig> points;
    for (std::size_t v = 0; v < sweep.values.size(); ++v)
    {
        for (std::size_t m = 0; m < sweep.modes.size(); ++m)
        {
            ScenarioConfig cfg = ApplyParameter(base, sweep.parameter, sweep.values[v]);
            cfg.mode = sweep.modes[m];
            if (!sweep.common_random_numbers)
            {
                cfg.seed = DeriveKey(base.seed, v, m);
            }
            auto violations = Validate(cfg);
            if (!violations.empty())
            {
                throw ConfigError(fmt::format("sweep point {}={} mode {} is invalid",
                                              sweep.parameter, sweep.values[v], ToString(cfg.mode)),
                                  std::move(violations));
            }
            points.push_back(std::move(cfg));
        }
    }

    // Score tables are large; share one load across the sweep.
    std::shared_ptr<const InferenceOracle> shared;
    if (base.oracle.kind == OracleKind::Empirical)
    {
        shared = MakeOracle(base.oracle);
    }

    std::vector<SweepRow> rows;
    std::size_t k = 0;
    for (std::size_t v = 0; v < sweep.values.size(); ++v)
    {
        for (std::size_t m = 0; m < sweep.modes.size(); ++m, ++k)
        {
            const ScenarioConfig& cfg = points[k];
            auto oracle = cfg.oracle.kind == OracleKind::Empirical && cfg.oracle.manifest == base.oracle.manifest
                              ? shared
                              : nullptr;
            rows.push_back({sweep.parameter, sweep.values[v], sweep.modes[m], Campaign(cfg, oracle).Run(workers)});
        }
    }
    return rows;
}

} // namespace gomec
