#pragma once

#include "gomec/config.hpp"
#include "gomec/rng.hpp"

#include <optional>

namespace gomec
{

/// One availability realization: f = alpha * beta * f_max.
struct CpuDraw
{
    double beta;
    double f; ///< cycles/s
};

struct ComputePlanInput
{
    CpuDraw primary_draw;
    std::optional<CpuDraw> helper_draw;
    double backhaul_rtt;      ///< s
    double workload_primary;  ///< cycles
    double workload_helper;   ///< cycles
};

CpuDraw MakeCpuDraw(const MehConfig& meh, double beta);

/// beta = beta_max when deterministic, otherwise uniform on (0, beta_max].
CpuDraw SampleBeta(RngStream& rng, const MehConfig& meh);

/// workload / f, kInfinite when f == 0.
double ComputeDelayStandalone(const CpuDraw& draw, double workload);

/// Helper branch including the backhaul round trip.
double HelperBranchDelay(const CpuDraw& draw, double workload, double rtt);

/// max(J_p / f_p, J_h / f_h + rtt). Throws std::domain_error without a helper draw.
double ComputeDelayEnsemble(const ComputePlanInput& input);

/// kappa * f^2 * workload.
double MehEnergy(const MehConfig& meh, const CpuDraw& draw, double workload);

} // namespace gomec
