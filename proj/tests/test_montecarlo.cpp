#include "gomec/montecarlo.hpp"

#include <doctest.h>

#include <cmath>

using namespace gomec;
using doctest::Approx;

namespace
{

/// No randomness left except inference: fixed distance, no fading, full CPU.
ScenarioConfig
Degenerate()
{
    ScenarioConfig cfg = DefaultScenario();
    cfg.radio.fixed_distance = 50.0;
    cfg.radio.fading = FadingModel::None;
    cfg.primary.beta_deterministic = true;
    cfg.helper->beta_deterministic = true;
    cfg.oracle.kind = OracleKind::Perfect;
    cfg.trials = 5000;
    return cfg;
}

void
CheckInvariants(const CampaignStats& s)
{
    CHECK(s.effectiveness >= 0.0);
    CHECK(s.effectiveness <= 1.0);
    CHECK(s.ci_low <= s.effectiveness);
    CHECK(s.effectiveness <= s.ci_high);
    CHECK(s.mean_device_energy >= 0.0);
    CHECK(s.mean_mec_energy >= 0.0);
    CHECK(s.goal_met <= s.trials);
    CHECK(s.cooperative_rate + s.helper_only_rate <= 1.0 + 1e-12);
    CHECK(s.delay_outage_rate <= 1.0 - s.effectiveness + 1e-12);
}

} // namespace

TEST_CASE("degenerate scenario always meets the goal")
{
    const CampaignStats s = RunCampaign(Degenerate(), 1);
    CHECK(s.trials == 5000);
    CHECK(s.effectiveness == 1.0);
    CHECK(s.ci_low == 1.0);
    CHECK(s.ci_high == 1.0);
    CHECK(s.best_effort_rate == 0.0);
    CHECK(s.mean_device_energy == s.mean_device_energy_goal_met);
    CheckInvariants(s);
}

TEST_CASE("compute slower than the deadline never meets it")
{
    ScenarioConfig cfg = Degenerate();
    cfg.primary.workload_cycles = 1e9; // 0.222 s at 4.5 GHz
    const CampaignStats s = RunCampaign(cfg, 1);
    CHECK(s.effectiveness == 0.0);
    CHECK(s.delay_outage_rate == 1.0);
    CHECK(s.best_effort_rate == 1.0);
    CheckInvariants(s);
}

TEST_CASE("cooperative synthetic success matches the closed form")
{
    ScenarioConfig cfg = Degenerate();
    cfg.mode = InferenceMode::Ensemble;
    cfg.oracle.kind = OracleKind::Synthetic;
    cfg.oracle.synthetic.a_p_clean = 0.9;
    cfg.oracle.synthetic.a_h_clean = 0.9;
    cfg.oracle.synthetic.joint_clean = 0.85;
    cfg.oracle.synthetic.tie_gain = 0.5;
    cfg.trials = 100000;
    const CampaignStats s = RunCampaign(cfg, 1);
    CHECK(s.cooperative_rate == 1.0);
    CHECK(s.delay_outage_rate == 0.0);
    CHECK(std::abs(s.effectiveness - 0.90) <= 0.003);
    CheckInvariants(s);
}

TEST_CASE("results are bit-identical for any worker count")
{
    ScenarioConfig cfg = DefaultScenario();
    cfg.mode = InferenceMode::Ensemble;
    cfg.trials = 3 * kTrialBlock + 17;
    const Campaign campaign(cfg);
    const CampaignStats one = campaign.Run(1);
    CHECK(campaign.Run(2) == one);
    CHECK(campaign.Run(5) == one);
    CheckInvariants(one);
}

TEST_CASE("stats agree with a direct pass over the trial records")
{
    ScenarioConfig cfg = DefaultScenario();
    cfg.trials = 2000;
    const Campaign campaign(cfg);
    const CampaignStats s = campaign.Run(1);

    std::int64_t met = 0;
    double energy = 0.0;
    for (std::int64_t i = 0; i < cfg.trials; ++i)
    {
        const TrialRecord r = campaign.Trial(i);
        met += r.outcome.goal_met;
        energy += r.e_device_accounted;
    }
    CHECK(s.goal_met == met);
    CHECK(s.effectiveness == Approx(static_cast<double>(met) / cfg.trials));
    CHECK(s.mean_device_energy == Approx(energy / cfg.trials).epsilon(1e-12));
}

TEST_CASE("common random numbers across a BER change")
{
    ScenarioConfig a = DefaultScenario();
    ScenarioConfig b = a;
    b.radio.ber_target = 1e-4;
    const Campaign ca(a);
    const Campaign cb(b);
    for (std::int64_t i = 0; i < 500; ++i)
    {
        const TrialRecord ra = ca.Trial(i);
        const TrialRecord rb = cb.Trial(i);
        CHECK(ra.channel.distance == rb.channel.distance);
        CHECK(ra.draws.h == rb.draws.h);
        CHECK(ra.draws.primary.f == rb.draws.primary.f);
    }
}

TEST_CASE("sweeps produce one row per value and mode")
{
    ScenarioConfig cfg = DefaultScenario();
    cfg.trials = 500;
    SweepSpec spec;
    spec.parameter = "radio.ber_target";
    spec.values = {1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
    spec.modes = {InferenceMode::Standalone, InferenceMode::Ensemble};
    const auto rows = RunSweep(cfg, spec, 1);
    REQUIRE(rows.size() == 10);
    CHECK(rows[0].value == 1e-5);
    CHECK(rows[0].mode == InferenceMode::Standalone);
    CHECK(rows[1].mode == InferenceMode::Ensemble);
    for (const auto& row : rows)
    {
        CHECK(row.stats.trials == 500);
        CheckInvariants(row.stats);
    }

    SweepSpec derived = spec;
    derived.common_random_numbers = false;
    const auto rows2 = RunSweep(cfg, derived, 1);
    CHECK_FALSE(rows2[0].stats == rows[0].stats);
}

TEST_CASE("ApplyParameter resolves paths and rejects bad ones")
{
    const ScenarioConfig cfg = DefaultScenario();
    CHECK(ApplyParameter(cfg, "backhaul.rtt_s", 0.025).backhaul.rtt == 0.025);
    const ScenarioConfig both = ApplyParameter(cfg, "mehs.beta_max", 0.5);
    CHECK(both.primary.beta_max == 0.5);
    CHECK(both.helper->beta_max == 0.5);
    CHECK_THROWS_AS(ApplyParameter(cfg, "radio.nope", 1.0), ConfigError);
    CHECK_THROWS_AS(ApplyParameter(cfg, "radio.ber_target", 0.5), ConfigError);

    SweepSpec spec{"radio.ber_target", {1e-3, 0.5}, {InferenceMode::Standalone}};
    CHECK_THROWS_AS(RunSweep(cfg, spec, 1), ConfigError);
}

TEST_CASE("binomial intervals")
{
    double lo = 0;
    double hi = 0;
    BinomialCi95(50, 100, CiMethod::Normal, lo, hi);
    CHECK(lo == Approx(0.5 - 1.959964 * 0.05).epsilon(1e-5));
    CHECK(hi == Approx(0.5 + 1.959964 * 0.05).epsilon(1e-5));

    // Reference Clopper-Pearson bounds for 5/20.
    BinomialCi95(5, 20, CiMethod::ClopperPearson, lo, hi);
    CHECK(lo == Approx(0.0865715).epsilon(1e-5));
    CHECK(hi == Approx(0.4910459).epsilon(1e-5));

    BinomialCi95(0, 20, CiMethod::ClopperPearson, lo, hi);
    CHECK(lo == 0.0);
    CHECK(hi == Approx(0.1684335).epsilon(1e-5));
    BinomialCi95(20, 20, CiMethod::ClopperPearson, lo, hi);
    CHECK(hi == 1.0);
}

TEST_CASE("device energy is capped for unbounded uplink delays")
{
    ScenarioConfig cfg = Degenerate();
    cfg.radio.pathloss.a_db = 400.0;
    cfg.trials = 100;
    const CampaignStats s = RunCampaign(cfg, 1);
    CHECK(s.energy_capped_rate == 1.0);
    CHECK(s.effectiveness == 0.0);
    CHECK(s.mean_device_energy == Approx(cfg.radio.p_max * kEnergyCapFactor * cfg.goal.d_max));
    CHECK(std::isfinite(s.mean_device_energy));
}
