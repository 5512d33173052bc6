#pragma once

#include "gomec/compute.hpp"
#include "gomec/config.hpp"
#include "gomec/inference.hpp"
#include "gomec/radio.hpp"

#include <optional>

namespace gomec
{

/// Relative slack used when comparing a total delay against the deadline, so
/// that exact-meet plans are not reported as outages because of rounding.
inline constexpr double kDeadlineRelTol = 1e-9;

bool MeetsDeadline(double d_tot, double d_max);

struct ExecutionPlan
{
    ExecutionMode mode = ExecutionMode::StandalonePrimary;
    double p_tx = 0.0;                ///< W
    bool best_effort = false;         ///< transmitting at p_max without a delay guarantee
    double target_uplink_delay = 0.0; ///< s, 0 when no compute budget is left
    bool exact_inversion = false;     ///< p_tx reproduces the target delay exactly

    bool PrimaryExecutes() const
    {
        return mode != ExecutionMode::StandaloneHelper;
    }

    bool HelperExecutes() const
    {
        return mode != ExecutionMode::StandalonePrimary;
    }
};

/// Workload cycles at each MEH.
struct Workloads
{
    double primary;
    double helper;
};

/// Channel and availability realizations the controller observes.
struct TrialDraws
{
    double h;
    CpuDraw primary;
    std::optional<CpuDraw> helper;
};

/**
 * Exact-meet power for a single MEH whose compute delay is @p compute_delay
 * (helper delays include the backhaul round trip): target uplink delay
 * max(0, d_max - compute_delay); p_max and best effort when the target is
 * zero or the inversion clamps.
 */
ExecutionPlan PlanForComputeDelay(const RadioConfig& radio,
                                  double h,
                                  double compute_delay,
                                  const GoalSpec& goal,
                                  ExecutionMode mode);

ExecutionPlan PlanStandalone(const RadioConfig& radio,
                             double h,
                             const CpuDraw& draw,
                             double workload,
                             const GoalSpec& goal);

/// Cooperative when the p_max uplink delay plus the ensemble compute delay
/// meets the deadline; otherwise standalone at the MEH with the smaller
/// effective delay (ties go to the primary). Throws std::domain_error when
/// @p draws has no helper.
ExecutionPlan PlanEnsemble(const RadioConfig& radio,
                           const TrialDraws& draws,
                           const Workloads& workloads,
                           const BackhaulConfig& backhaul,
                           const GoalSpec& goal);

struct TrialOutcome
{
    double d_u = 0.0;
    double d_c = 0.0;
    double d_tot = 0.0;
    double e_device = 0.0;
    double e_meh_p = 0.0;
    double e_meh_h = 0.0;
    InferenceOutcome outcome;
    bool goal_met = false;
    bool delay_outage = false;
    bool inference_outage = false;
    bool best_effort = false;
    ExecutionMode mode = ExecutionMode::StandalonePrimary;
    SeBranch branch = SeBranch::HighSE;
    bool exact_inversion = false;
    bool ambiguous_branch = false;
};

struct MehPair
{
    const MehConfig& primary;
    const MehConfig* helper;
};

/// Realizes a plan: delays, energies, inference values and the goal event.
/// Energies are raw here (kInfinite when the uplink rate is zero).
TrialOutcome EvaluateTrial(const ExecutionPlan& plan,
                           const RadioConfig& radio,
                           const TrialDraws& draws,
                           const MehPair& mehs,
                           const Workloads& workloads,
                           const BackhaulConfig& backhaul,
                           const GoalSpec& goal,
                           const InferenceOracle& oracle,
                           RngStream& inference_rng);

} // namespace gomec
