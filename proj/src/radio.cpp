#include "gomec/radio.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace gomec
{

double
PathLossDb(double distance, double carrier_freq, double min_distance, const PathLossModel& model)
{
    if (!(distance >= min_distance))
    {
        throw std::domain_error(
            fmt::format("path loss: distance {} m below minimum {} m", distance, min_distance));
    }
    return model.a_db + model.b_db * std::log10(distance) + model.c_db * std::log10(carrier_freq / 1e9);
}

double
PathLossDb(const RadioConfig& radio, double distance)
{
    return PathLossDb(distance, radio.carrier_freq, radio.min_distance, radio.pathloss);
}

ChannelDraw
SampleChannel(RngStream& distance_rng, RngStream& fading_rng, RngStream& shadowing_rng, const RadioConfig& radio)
{
    ChannelDraw draw{};
    if (radio.fixed_distance)
    {
        draw.distance = *radio.fixed_distance;
    }
    else
    {
        draw.distance = std::max(radio.min_distance, std::sqrt(distance_rng.Uniform01()) * radio.cell_radius);
    }
    draw.pathloss_db = PathLossDb(radio, draw.distance);
    if (radio.shadowing_std_db > 0)
    {
        draw.pathloss_db += radio.shadowing_std_db * shadowing_rng.Normal();
    }
    draw.fading_power_gain = radio.fading == FadingModel::Rayleigh ? fading_rng.Exponential() : 1.0;
    draw.h = std::pow(10.0, -draw.pathloss_db / 10.0) * draw.fading_power_gain;
    return draw;
}

BerMargin
BerMarginFor(double ber, SeBranch branch)
{
    if (!(ber > 0 && ber <= 0.1))
    {
        throw std::domain_error(fmt::format("BER margin: ber {} outside (0, 0.1]", ber));
    }
    const double scale = branch == SeBranch::HighSE ? 5.0 : 0.5;
    return {-1.5 / std::log(scale * ber), branch};
}

BerMargin
BerMarginFor(double ber, double spectral_efficiency_hint)
{
    return BerMarginFor(ber, spectral_efficiency_hint >= kSeBranchThreshold ? SeBranch::HighSE : SeBranch::LowSE);
}

UplinkResult
UplinkDelay(const RadioConfig& radio, double h, double p)
{
    if (!(p >= 0 && p <= radio.p_max))
    {
        throw std::domain_error(fmt::format("uplink: power {} W outside [0, {}]", p, radio.p_max));
    }
    UplinkResult res{};
    res.p_used = p;
    if (h * p <= 0)
    {
        res.rate = 0;
        res.delay = kInfinite;
        res.energy = kInfinite;
        return res;
    }

    const double snr = h * p / (radio.noise_psd * radio.bandwidth);
    const BerMargin high = BerMarginFor(radio.ber_target, SeBranch::HighSE);
    double se = std::log2(1.0 + high.phi * snr);
    res.branch = SeBranch::HighSE;
    if (se < kSeBranchThreshold)
    {
        const BerMargin low = BerMarginFor(radio.ber_target, SeBranch::LowSE);
        se = std::log2(1.0 + low.phi * snr);
        res.branch = SeBranch::LowSE;
        // Empty while the LowSE margin stays below the HighSE one; kept as a
        // per-trial diagnostic.
        res.ambiguous_branch = se >= kSeBranchThreshold;
    }
    res.rate = radio.bandwidth * se;
    res.delay = radio.n_bits / res.rate;
    res.energy = p * res.delay;
    return res;
}

PowerInversion
InvertPower(const RadioConfig& radio, double h, double target_delay)
{
    if (target_delay < 0)
    {
        throw std::domain_error(fmt::format("power inversion: negative target delay {}", target_delay));
    }
    if (target_delay == 0 || h <= 0)
    {
        return {radio.p_max, true, SeBranch::HighSE, false};
    }

    const double noise = radio.noise_psd * radio.bandwidth;
    const double required_se = radio.n_bits / (radio.bandwidth * target_delay);
    const BerMargin margin = BerMarginFor(radio.ber_target, required_se);
    const double p = std::expm1(required_se * std::numbers::ln2) * noise / (margin.phi * h);
    if (!(p <= radio.p_max))
    {
        return {radio.p_max, true, margin.branch, false};
    }

    bool exact = true;
    if (margin.branch == SeBranch::LowSE)
    {
        const double high_phi = BerMarginFor(radio.ber_target, SeBranch::HighSE).phi;
        exact = std::log2(1.0 + high_phi * h * p / noise) < kSeBranchThreshold;
    }
    return {p, false, margin.branch, exact};
}

} // namespace gomec
