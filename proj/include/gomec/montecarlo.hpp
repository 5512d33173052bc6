#pragma once

#include "gomec/config.hpp"
#include "gomec/inference.hpp"
#include "gomec/policy.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace gomec
{

/// Device energy of a trial is accounted as p_tx * min(d_u, cap) with
/// cap = kEnergyCapFactor * d_max, so unbounded uplink delays keep means finite.
inline constexpr double kEnergyCapFactor = 10.0;

/// Trials are reduced in fixed-size blocks, always merged in block order.
inline constexpr std::int64_t kTrialBlock = 4096;

struct CampaignStats
{
    std::int64_t trials = 0;
    std::int64_t goal_met = 0;
    double effectiveness = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double mean_device_energy = 0.0;          ///< J, all trials
    double mean_device_energy_goal_met = 0.0; ///< J, goal-met trials only (0 if none)
    double mean_mec_energy = 0.0;             ///< J per request, both MEHs
    double delay_outage_rate = 0.0;
    double inference_outage_rate = 0.0;
    double best_effort_rate = 0.0;
    double cooperative_rate = 0.0;
    double helper_only_rate = 0.0;
    double energy_capped_rate = 0.0;
    double inexact_inversion_rate = 0.0;
    double joint_clamped_rate = 0.0;

    bool operator==(const CampaignStats&) const = default;
};

/// Everything one trial produced, for diagnostics and paired comparisons.
struct TrialRecord
{
    ChannelDraw channel;
    TrialDraws draws;
    ExecutionPlan plan;
    TrialOutcome outcome;
    double e_device_accounted;
    bool energy_capped;
};

/// Order-insensitive partial sums; Merge is associative, and the engine
/// always merges in block order so floating-point sums are reproducible.
struct CampaignAccumulator
{
    std::int64_t trials = 0;
    std::int64_t goal_met = 0;
    std::int64_t delay_outages = 0;
    std::int64_t inference_outages = 0;
    std::int64_t best_effort = 0;
    std::int64_t cooperative = 0;
    std::int64_t helper_only = 0;
    std::int64_t energy_capped = 0;
    std::int64_t inexact_inversions = 0;
    std::int64_t joint_clamped = 0;
    double device_energy = 0.0;
    double device_energy_goal_met = 0.0;
    double mec_energy = 0.0;

    void Add(const TrialRecord& r);
    void Merge(const CampaignAccumulator& other);
    CampaignStats Finish(CiMethod ci) const;
};

/// Two-sided 95% interval for a binomial proportion.
void BinomialCi95(std::int64_t successes, std::int64_t trials, CiMethod method, double& lo, double& hi);

/**
 * A validated scenario bound to its inference oracle. Trial i draws its
 * channel, availabilities and inference value from streams keyed by
 * (seed, i, dimension), so any trial can be replayed in isolation and the
 * campaign result does not depend on the number of workers.
 */
class Campaign
{
  public:
    /// Throws ConfigError when the config is invalid. The oracle is built
    /// from the config unless one is supplied.
    explicit Campaign(ScenarioConfig cfg, std::shared_ptr<const InferenceOracle> oracle = nullptr);

    TrialRecord Trial(std::int64_t index) const;

    /// @p workers == 0 picks the hardware concurrency.
    CampaignStats Run(unsigned workers = 0) const;

    const ScenarioConfig& Config() const
    {
        return m_cfg;
    }

  private:
    ScenarioConfig m_cfg;
    RadioConfig m_radio;
    MehConfig m_primary;
    std::optional<MehConfig> m_helper;
    std::shared_ptr<const InferenceOracle> m_oracle;
};

CampaignStats RunCampaign(const ScenarioConfig& cfg, unsigned workers = 0);

struct SweepSpec
{
    std::string parameter; ///< dotted path into the SI config, "mehs.<field>" sets both MEHs
    std::vector<double> values;
    std::vector<InferenceMode> modes;
    /// Every campaign reuses the master seed so channel and availability draws
    /// coincide across values; otherwise seeds derive from (seed, value, mode).
    bool common_random_numbers = true;
};

struct SweepRow
{
    std::string parameter;
    double value;
    InferenceMode mode;
    CampaignStats stats;
};

/// Copy of @p cfg with @p path set to @p value. Throws ConfigError for an
/// unresolvable path or when the result fails validation.
ScenarioConfig ApplyParameter(const ScenarioConfig& cfg, const std::string& path, double value);

/// One campaign per (value, mode), rows in sweep order. Every point is
/// resolved and validated before the first campaign runs.
std::vector<SweepRow> RunSweep(const ScenarioConfig& base, const SweepSpec& sweep, unsigned workers = 0);

} // namespace gomec
