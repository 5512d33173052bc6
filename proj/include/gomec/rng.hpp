#pragma once

#include <array>
#include <cstdint>

namespace gomec
{

/// Independent random dimensions of one trial. Each (seed, trial, dimension)
/// triple owns its own stream, so adding draws to one dimension never shifts
/// another and a swept parameter that does not touch sampling sees the same
/// channel and availability realizations.
enum class RngDimension : std::uint64_t
{
    Distance = 1,
    Fading = 2,
    Shadowing = 3,
    BetaPrimary = 4,
    BetaHelper = 5,
    Inference = 6,
};

std::uint64_t SplitMix64(std::uint64_t& state);

/// Stateless mix of a (seed, trial, tag) triple into a 64-bit key.
std::uint64_t DeriveKey(std::uint64_t seed, std::uint64_t index, std::uint64_t tag);

/**
 * xoshiro256** generator seeded through SplitMix64. Distribution helpers use
 * explicit inversion formulas instead of <random> distributions so that a
 * given key yields the same sequence with every standard library.
 */
class RngStream
{
  public:
    explicit RngStream(std::uint64_t key);
    RngStream(std::uint64_t seed, std::uint64_t trial, RngDimension dim);

    std::uint64_t NextU64();

    /// Uniform on (0, 1].
    double Uniform01();

    /// Uniform on (lo, hi].
    double Uniform(double lo, double hi);

    /// Standard exponential, mean 1.
    double Exponential();

    /// Standard normal (Box-Muller, one value per call).
    double Normal();

    /// Uniform integer in [0, n), n > 0, without modulo bias.
    std::uint64_t UniformIndex(std::uint64_t n);

  private:
    std::array<std::uint64_t, 4> m_s;
};

} // namespace gomec
