#pragma once

#include "gomec/config.hpp"
#include "gomec/rng.hpp"

namespace gomec
{

/// Branch of the BER-margin approximation. HighSE is valid for spectral
/// efficiencies of 4 bit/s/Hz and above, LowSE below.
enum class SeBranch
{
    HighSE,
    LowSE
};

inline constexpr double kSeBranchThreshold = 4.0;

struct BerMargin
{
    double phi;
    SeBranch branch;
};

struct ChannelDraw
{
    double distance;          ///< m
    double pathloss_db;       ///< dB, including shadowing
    double fading_power_gain; ///< |g|^2
    double h;                 ///< linear power gain
};

struct UplinkResult
{
    double rate;   ///< bit/s
    double delay;  ///< s, kInfinite when rate == 0
    double energy; ///< J, kInfinite when rate == 0
    double p_used; ///< W
    bool clamped = false;
    SeBranch branch = SeBranch::HighSE;
    /// The HighSE evaluation fell below 4 but the LowSE one did not.
    bool ambiguous_branch = false;
};

struct PowerInversion
{
    double p;
    bool clamped;
    SeBranch branch;
    /// UplinkDelay(p) reproduces the target delay. False inside the band
    /// where a LowSE power would be re-classified HighSE by the forward
    /// evaluation (the realized delay is then shorter than the target).
    bool exact;
};

/// a + b*log10(d) + c*log10(f_GHz). Throws std::domain_error below min_distance.
double PathLossDb(double distance, double carrier_freq, double min_distance, const PathLossModel& model = {});
double PathLossDb(const RadioConfig& radio, double distance);

/// Distance uniform over the disk (clamped to min_distance), Rayleigh power
/// gain, optional log-normal shadowing. Fading and shadowing are skipped
/// when disabled, so the respective streams are left untouched.
ChannelDraw SampleChannel(RngStream& distance_rng,
                          RngStream& fading_rng,
                          RngStream& shadowing_rng,
                          const RadioConfig& radio);

/// Throws std::domain_error for ber outside (0, 0.1].
BerMargin BerMarginFor(double ber, double spectral_efficiency_hint);
BerMargin BerMarginFor(double ber, SeBranch branch);

/**
 * Uplink rate, delay and transmit energy for power @p p over gain @p h.
 * The spectral efficiency is first evaluated with the HighSE margin; when
 * it falls below 4 the LowSE margin is used instead and that result kept.
 * Throws std::domain_error when p lies outside [0, p_max].
 */
UplinkResult UplinkDelay(const RadioConfig& radio, double h, double p);

/// Smallest power meeting @p target_delay, clamped to p_max.
/// Throws std::domain_error for a negative target.
PowerInversion InvertPower(const RadioConfig& radio, double h, double target_delay);

} // namespace gomec
