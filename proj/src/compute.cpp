#include "gomec/compute.hpp"

#include <algorithm>
#include <stdexcept>

namespace gomec
{

CpuDraw
MakeCpuDraw(const MehConfig& meh, double beta)
{
    return {beta, meh.alpha * beta * meh.f_max};
}

CpuDraw
SampleBeta(RngStream& rng, const MehConfig& meh)
{
    if (meh.beta_deterministic)
    {
        return MakeCpuDraw(meh, meh.beta_max);
    }
    return MakeCpuDraw(meh, rng.Uniform(0.0, meh.beta_max));
}

double
ComputeDelayStandalone(const CpuDraw& draw, double workload)
{
    if (draw.f <= 0)
    {
        return kInfinite;
    }
    return workload / draw.f;
}

double
HelperBranchDelay(const CpuDraw& draw, double workload, double rtt)
{
    return ComputeDelayStandalone(draw, workload) + rtt;
}

double
ComputeDelayEnsemble(const ComputePlanInput& input)
{
    if (!input.helper_draw)
    {
        throw std::domain_error("ensemble compute delay requires a helper draw");
    }
    return std::max(ComputeDelayStandalone(input.primary_draw, input.workload_primary),
                    HelperBranchDelay(*input.helper_draw, input.workload_helper, input.backhaul_rtt));
}

double
MehEnergy(const MehConfig& meh, const CpuDraw& draw, double workload)
{
    return meh.kappa * draw.f * draw.f * workload;
}

} // namespace gomec
