#include "gomec/rng.hpp"

#include <cmath>
#include <numbers>

namespace gomec
{

namespace
{

constexpr std::uint64_t
Rotl(std::uint64_t x, int k)
{
    return (x << k) | (x >> (64 - k));
}

} // namespace

std::uint64_t
SplitMix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t
DeriveKey(std::uint64_t seed, std::uint64_t index, std::uint64_t tag)
{
    std::uint64_t state = seed;
    std::uint64_t k = SplitMix64(state);
    state = k ^ index;
    k = SplitMix64(state);
    state = k ^ (tag * 0xd1b54a32d192ed03ULL);
    return SplitMix64(state);
}

RngStream::RngStream(std::uint64_t key)
{
    std::uint64_t state = key;
    for (auto& word : m_s)
    {
        word = SplitMix64(state);
    }
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t trial, RngDimension dim)
    : RngStream(DeriveKey(seed, trial, static_cast<std::uint64_t>(dim)))
{
}

std::uint64_t
RngStream::NextU64()
{
    const std::uint64_t result = Rotl(m_s[1] * 5, 7) * 9;
    const std::uint64_t t = m_s[1] << 17;
    m_s[2] ^= m_s[0];
    m_s[3] ^= m_s[1];
    m_s[1] ^= m_s[2];
    m_s[0] ^= m_s[3];
    m_s[2] ^= t;
    m_s[3] = Rotl(m_s[3], 45);
    return result;
}

double
RngStream::Uniform01()
{
    // 53 random mantissa bits, shifted from [0, 1) to (0, 1].
    return (static_cast<double>(NextU64() >> 11) + 1.0) * 0x1.0p-53;
}

double
RngStream::Uniform(double lo, double hi)
{
    return lo + (hi - lo) * Uniform01();
}

double
RngStream::Exponential()
{
    return -std::log(Uniform01());
}

double
RngStream::Normal()
{
    const double u1 = Uniform01();
    const double u2 = Uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t
RngStream::UniformIndex(std::uint64_t n)
{
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x = NextU64();
    while (x >= limit)
    {
        x = NextU64();
    }
    return x % n;
}

} // namespace gomec
