#include "gomec/policy.hpp"

#include <algorithm>
#include <stdexcept>

namespace gomec
{

bool
MeetsDeadline(double d_tot, double d_max)
{
    return d_tot <= d_max * (1.0 + kDeadlineRelTol);
}

ExecutionPlan
PlanForComputeDelay(const RadioConfig& radio, double h, double compute_delay, const GoalSpec& goal, ExecutionMode mode)
{
    ExecutionPlan plan;
    plan.mode = mode;
    plan.target_uplink_delay = std::max(0.0, goal.d_max - compute_delay);
    if (plan.target_uplink_delay <= 0)
    {
        plan.p_tx = radio.p_max;
        plan.best_effort = true;
        return plan;
    }
    const PowerInversion inv = InvertPower(radio, h, plan.target_uplink_delay);
    plan.p_tx = inv.p;
    plan.best_effort = inv.clamped;
    plan.exact_inversion = inv.exact;
    return plan;
}

ExecutionPlan
PlanStandalone(const RadioConfig& radio, double h, const CpuDraw& draw, double workload, const GoalSpec& goal)
{
    return PlanForComputeDelay(radio, h, ComputeDelayStandalone(draw, workload), goal, ExecutionMode::StandalonePrimary);
}

ExecutionPlan
PlanEnsemble(const RadioConfig& radio,
             const TrialDraws& draws,
             const Workloads& workloads,
             const BackhaulConfig& backhaul,
             const GoalSpec& goal)
{
    if (!draws.helper)
    {
        throw std::domain_error("ensemble planning requires a helper MEH");
    }
    const double primary_delay = ComputeDelayStandalone(draws.primary, workloads.primary);
    const double helper_delay = HelperBranchDelay(*draws.helper, workloads.helper, backhaul.rtt);
    const double cooperative_delay = std::max(primary_delay, helper_delay);

    const double d_u_min = UplinkDelay(radio, draws.h, radio.p_max).delay;
    if (d_u_min + cooperative_delay <= goal.d_max)
    {
        return PlanForComputeDelay(radio, draws.h, cooperative_delay, goal, ExecutionMode::Cooperative);
    }
    if (helper_delay < primary_delay)
    {
        return PlanForComputeDelay(radio, draws.h, helper_delay, goal, ExecutionMode::StandaloneHelper);
    }
    return PlanForComputeDelay(radio, draws.h, primary_delay, goal, ExecutionMode::StandalonePrimary);
}

TrialOutcome
EvaluateTrial(const ExecutionPlan& plan,
              const RadioConfig& radio,
              const TrialDraws& draws,
              const MehPair& mehs,
              const Workloads& workloads,
              const BackhaulConfig& backhaul,
              const GoalSpec& goal,
              const InferenceOracle& oracle,
              RngStream& inference_rng)
{
    TrialOutcome out;
    out.mode = plan.mode;
    out.best_effort = plan.best_effort;
    out.exact_inversion = plan.exact_inversion;

    const UplinkResult up = UplinkDelay(radio, draws.h, plan.p_tx);
    out.d_u = up.delay;
    out.e_device = up.energy;
    out.branch = up.branch;
    out.ambiguous_branch = up.ambiguous_branch;

    if (plan.HelperExecutes() && (!draws.helper || !mehs.helper))
    {
        throw std::domain_error("plan uses the helper MEH but no helper draw is available");
    }
    switch (plan.mode)
    {
    case ExecutionMode::StandalonePrimary:
        out.d_c = ComputeDelayStandalone(draws.primary, workloads.primary);
        break;
    case ExecutionMode::StandaloneHelper:
        out.d_c = HelperBranchDelay(*draws.helper, workloads.helper, backhaul.rtt);
        break;
    case ExecutionMode::Cooperative:
        out.d_c = ComputeDelayEnsemble({draws.primary, draws.helper, backhaul.rtt, workloads.primary, workloads.helper});
        break;
    }
    out.d_tot = out.d_u + out.d_c;

    if (plan.PrimaryExecutes())
    {
        out.e_meh_p = MehEnergy(mehs.primary, draws.primary, workloads.primary);
    }
    if (plan.HelperExecutes())
    {
        out.e_meh_h = MehEnergy(*mehs.helper, *draws.helper, workloads.helper);
    }

    out.outcome = oracle.Sample(inference_rng, radio.ber_target, plan.mode);
    out.delay_outage = !MeetsDeadline(out.d_tot, goal.d_max);
    out.inference_outage = !out.outcome.theta_agg;
    out.goal_met = !out.delay_outage && !out.inference_outage;
    return out;
}

} // namespace gomec
