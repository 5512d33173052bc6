// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.
#include "gomec/montecarlo.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace gomec;

namespace
{

struct Verdict
{
    bool pass = true;
    std::vector<std::string> notes;

    void Require(bool ok, const std::string& what)
    {
        pass = pass && ok;
        notes.push_back(fmt::format("{}{}", ok ? "" : "FAILED ", what));
    }
};

ScenarioConfig
Base(InferenceMode mode, std::int64_t trials)
{
    ScenarioConfig cfg = DefaultScenario();
    cfg.mode = mode;
    cfg.trials = trials;
    return cfg;
}

Verdict
BerMargins()
{
    Verdict v;
    const double high3 = BerMarginFor(1e-3, SeBranch::HighSE).phi;
    const double high4 = BerMarginFor(1e-4, SeBranch::HighSE).phi;
    const double low3 = BerMarginFor(1e-3, SeBranch::LowSE).phi;
    v.Require(std::abs(high3 - 0.283109) < 1e-6, fmt::format("HighSE phi(1e-3)={:.9f}", high3));
    v.Require(std::abs(high4 - 0.197345) < 1e-6, fmt::format("HighSE phi(1e-4)={:.9f}", high4));
    v.Require(std::abs(low3 - 0.197345) < 1e-6, fmt::format("LowSE phi(1e-3)={:.9f}", low3));
    return v;
}

Verdict
EnergyRatio()
{
    Verdict v;
    const double expected = 0.767463;

    // Energy at a fixed delay is proportional to 1/phi on the LowSE branch.
    const double analytic = std::log(5e-4) / std::log(5e-5);
    const double model = BerMarginFor(1e-4, SeBranch::LowSE).phi / BerMarginFor(1e-3, SeBranch::LowSE).phi;
    v.Require(std::abs(analytic - expected) < 1e-4, fmt::format("closed form {:.6f}", analytic));
    v.Require(std::abs(model - expected) < 1e-4, fmt::format("phi ratio {:.6f}", model));

    // Paired campaign: same draws at both BERs, trials whose plans are exact,
    // unclamped and on the LowSE branch at both.
    ScenarioConfig loose = Base(InferenceMode::Standalone, 10000);
    ScenarioConfig tight = loose;
    tight.radio.ber_target = 1e-4;
    const Campaign a(loose);
    const Campaign b(tight);
    double e_loose = 0.0;
    double e_tight = 0.0;
    std::int64_t used = 0;
    for (std::int64_t i = 0; i < loose.trials; ++i)
    {
        const TrialRecord ra = a.Trial(i);
        const TrialRecord rb = b.Trial(i);
        auto usable = [](const TrialRecord& r) {
            return !r.plan.best_effort && r.plan.exact_inversion && r.outcome.branch == SeBranch::LowSE;
        };
        if (usable(ra) && usable(rb))
        {
            e_loose += ra.outcome.e_device;
            e_tight += rb.outcome.e_device;
            ++used;
        }
    }
    const double ratio = e_loose / e_tight;
    v.Require(used > 0 && std::abs(ratio - expected) < 0.005,
              fmt::format("campaign ratio {:.6f} over {} paired trials", ratio, used));
    return v;
}

Verdict
Plateau()
{
    Verdict v;
    ScenarioConfig loose = Base(InferenceMode::Standalone, 100000);
    ScenarioConfig tight = loose;
    tight.radio.ber_target = 1e-4;
    const CampaignStats sl = RunCampaign(loose);
    const CampaignStats st = RunCampaign(tight);

    const double gap = std::abs(sl.effectiveness - st.effectiveness);
    v.Require(gap < 0.01, fmt::format("effectiveness {:.4f} vs {:.4f}", st.effectiveness, sl.effectiveness));

    // The drop is measured on requests that met the goal, where the controller
    // picked the transmit power. Best-effort trials transmit at p_max at both
    // BERs and dilute the unconditional mean.
    const double drop = 1.0 - sl.mean_device_energy_goal_met / st.mean_device_energy_goal_met;
    const double drop_all = 1.0 - sl.mean_device_energy / st.mean_device_energy;
    v.Require(drop >= 0.15, fmt::format("goal-met device energy drop {:.2f}%", 100 * drop));
    v.notes.push_back(fmt::format("info: unconditional drop {:.2f}%", 100 * drop_all));
    return v;
}

Verdict
MecEnergy()
{
    Verdict v;
    const double j = 2e8;
    MehConfig full;
    MehConfig half;
    half.beta_max = 0.5;

    // Energy model alone.
    const int n = 1000000;
    double single = 0.0;
    double pair = 0.0;
    for (int i = 0; i < n; ++i)
    {
        RngStream p(11, i, RngDimension::BetaPrimary);
        RngStream h(11, i, RngDimension::BetaHelper);
        RngStream s(12, i, RngDimension::BetaPrimary);
        single += MehEnergy(full, SampleBeta(s, full), j);
        pair += MehEnergy(half, SampleBeta(p, half), j) + MehEnergy(half, SampleBeta(h, half), j);
    }
    const double iso = pair / single;
    v.Require(std::abs(iso / 0.5 - 1.0) < 0.02, fmt::format("isolated ratio {:.4f}", iso));

    // Full campaigns with a deadline loose enough for cooperation everywhere.
    auto relaxed = [](InferenceMode mode, double beta_max, bool deterministic) {
        ScenarioConfig cfg = Base(mode, 100000);
        cfg.goal.d_max = 1e6;
        cfg.backhaul.rtt = 0.0;
        cfg.primary.beta_max = beta_max;
        cfg.helper->beta_max = beta_max;
        cfg.primary.beta_deterministic = deterministic;
        cfg.helper->beta_deterministic = deterministic;
        return RunCampaign(cfg);
    };
    const CampaignStats standalone = relaxed(InferenceMode::Standalone, 1.0, false);
    const CampaignStats ensemble = relaxed(InferenceMode::Ensemble, 0.5, false);
    const double campaign = ensemble.mean_mec_energy / standalone.mean_mec_energy;
    // Deep Rayleigh fades can still exceed any finite deadline at p_max.
    v.Require(ensemble.cooperative_rate >= 0.999, fmt::format("cooperative rate {:.5f}", ensemble.cooperative_rate));
    v.Require(std::abs(campaign / 0.5 - 1.0) < 0.10, fmt::format("campaign ratio {:.4f}", campaign));

    const CampaignStats det = relaxed(InferenceMode::Standalone, 1.0, true);
    const CampaignStats quarter = relaxed(InferenceMode::Ensemble, 0.25, false);
    const double small = quarter.mean_mec_energy / det.mean_mec_energy;
    v.Require(std::abs(small * 24.0 - 1.0) < 0.15, fmt::format("beta_max 0.25 ratio {:.5f} (1/24={:.5f})", small,
                                                               1.0 / 24.0));
    return v;
}

Verdict
Backhaul()
{
    Verdict v;
    const double d_max = DefaultScenario().goal.d_max;
    double prev_eff = 2.0;
    double coop0 = 0.0;
    double coop_last = 0.0;
    for (double frac : {0.0, 0.25, 0.75})
    {
        ScenarioConfig cfg = Base(InferenceMode::Ensemble, 100000);
        cfg.backhaul.rtt = frac * d_max;
        const CampaignStats s = RunCampaign(cfg);
        v.Require(s.effectiveness <= prev_eff,
                  fmt::format("rtt={:.3f}s effectiveness {:.4f} cooperative {:.4f}", cfg.backhaul.rtt,
                              s.effectiveness, s.cooperative_rate));
        prev_eff = s.effectiveness;
        if (frac == 0.0)
        {
            coop0 = s.cooperative_rate;
        }
        coop_last = s.cooperative_rate;
    }
    v.Require(coop0 > 0.0 && coop_last <= 0.5 * coop0, "cooperative rate falls by at least half");
    return v;
}

Verdict
Properties()
{
    Verdict v;
    const RadioConfig radio = DefaultScenario().radio;

    // Inversion round trip.
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> lh(-13.0, -8.0);
    std::uniform_real_distribution<double> ld(-4.0, 0.0);
    int cases = 0;
    double worst = 0.0;
    while (cases < 10000)
    {
        const double h = std::pow(10.0, lh(gen));
        const double target = std::pow(10.0, ld(gen));
        const PowerInversion inv = InvertPower(radio, h, target);
        if (inv.clamped || !inv.exact)
        {
            continue;
        }
        worst = std::max(worst, std::abs(UplinkDelay(radio, h, inv.p).delay / target - 1.0));
        ++cases;
    }
    v.Require(worst < 1e-9, fmt::format("round trip worst rel err {:.2e} over {} cases", worst, cases));

    // Exact-meet and conjunction over full campaigns in both modes.
    std::int64_t exact = 0;
    double exact_worst = 0.0;
    bool conjunction = true;
    for (InferenceMode mode : {InferenceMode::Standalone, InferenceMode::Ensemble})
    {
        const Campaign c(Base(mode, 20000));
        const double d_max = c.Config().goal.d_max;
        for (std::int64_t i = 0; i < c.Config().trials; ++i)
        {
            const TrialRecord r = c.Trial(i);
            conjunction = conjunction &&
                          r.outcome.goal_met == (!r.outcome.delay_outage && !r.outcome.inference_outage);
            if (!r.plan.best_effort && r.plan.exact_inversion)
            {
                exact_worst = std::max(exact_worst, std::abs(r.outcome.d_tot / d_max - 1.0));
                ++exact;
            }
        }
    }
    v.Require(exact > 0 && exact_worst < 1e-9,
              fmt::format("exact-meet worst rel err {:.2e} over {} plans", exact_worst, exact));
    v.Require(conjunction, "goal_met equals the outage conjunction on every trial");

    // Fading and availability moments.
    const int n = 1000000;
    double fading = 0.0;
    double beta_sq = 0.0;
    MehConfig meh;
    meh.beta_max = 0.8;
    for (int i = 0; i < n; ++i)
    {
        RngStream f(31, i, RngDimension::Fading);
        RngStream b(31, i, RngDimension::BetaPrimary);
        fading += f.Exponential();
        const double beta = SampleBeta(b, meh).beta;
        beta_sq += beta * beta;
    }
    fading /= n;
    beta_sq /= n;
    const double beta_sq_ref = meh.beta_max * meh.beta_max / 3.0;
    v.Require(std::abs(fading - 1.0) <= 0.005, fmt::format("fading mean {:.5f}", fading));
    v.Require(std::abs(beta_sq / beta_sq_ref - 1.0) <= 0.01, fmt::format("E[beta^2] {:.5f} vs {:.5f}", beta_sq,
                                                                       beta_sq_ref));

    // Worker-count determinism.
    const Campaign c(Base(InferenceMode::Ensemble, 50000));
    const CampaignStats one = c.Run(1);
    v.Require(c.Run(2) == one && c.Run(4) == one && c.Run(7) == one, "identical stats for 1, 2, 4, 7 workers");
    return v;
}

Verdict
DegenerateOracle()
{
    Verdict v;
    ScenarioConfig cfg = Base(InferenceMode::Ensemble, 100000);
    cfg.radio.fixed_distance = 50.0;
    cfg.radio.fading = FadingModel::None;
    cfg.primary.beta_deterministic = true;
    cfg.helper->beta_deterministic = true;
    cfg.oracle.kind = OracleKind::Synthetic;
    cfg.oracle.synthetic.a_p_clean = 0.9;
    cfg.oracle.synthetic.a_h_clean = 0.9;
    cfg.oracle.synthetic.joint_clean = 0.85;
    cfg.oracle.synthetic.tie_gain = 0.5;

    const double expected =
        SyntheticSuccessProbability(cfg.oracle.synthetic, cfg.radio.ber_target, ExecutionMode::Cooperative);
    const CampaignStats s = RunCampaign(cfg);
    const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(s.trials));
    v.Require(std::abs(expected - 0.90) < 1e-12, fmt::format("closed form {:.6f}", expected));
    v.Require(s.cooperative_rate == 1.0 && s.delay_outage_rate == 0.0, "every trial cooperates within the deadline");
    v.Require(std::abs(s.effectiveness - expected) <= 4.0 * se,
              fmt::format("effectiveness {:.5f}, {:.2f} SE from closed form", s.effectiveness,
                          std::abs(s.effectiveness - expected) / se));
    return v;
}

} // namespace

int
main()
{
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"BER margin values", BerMargins},
        {"device energy ratio at fixed delay", EnergyRatio},
        {"effectiveness plateau across BER", Plateau},
        {"MEC energy ordering", MecEnergy},
        {"backhaul sensitivity", Backhaul},
        {"property suites", Properties},
        {"degenerate-config oracle equivalence", DegenerateOracle},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try
        {
            v = criteria[i].second();
        }
        catch (const std::exception& e)
        {
            v.Require(false, fmt::format("exception: {}", e.what()));
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        fmt::print("{} criterion {}: {} ({:.1f}s)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, secs);
        for (const auto& note : v.notes)
        {
            fmt::print("    {}\n", note);
        }
        failed += !v.pass;
    }
    fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
