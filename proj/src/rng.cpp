#include "cbfsim/rng.hpp"

#include <limits>

namespace cbfsim
{

namespace
{

std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// FNV-1a over the label; mixed with the seed so streams are independent.
std::uint64_t hashLabel(std::string_view label)
{
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (const char c : label)
    {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ull;
    }
    return h;
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::string_view streamId)
    : m_seed(seed), m_streamId(streamId)
{
    std::uint64_t state = seed ^ hashLabel(streamId);
    std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(state)), static_cast<std::uint32_t>(splitmix64(state)),
                      static_cast<std::uint32_t>(splitmix64(state)), static_cast<std::uint32_t>(splitmix64(state))};
    m_engine.seed(seq);
}

std::uint64_t RngStream::uniformInt(std::uint64_t lo, std::uint64_t hi)
{
    if (lo >= hi)
    {
        return lo;
    }
    const std::uint64_t span = hi - lo;
    if (span == std::numeric_limits<std::uint64_t>::max())
    {
        return m_engine();
    }
    const std::uint64_t range = span + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t draw;
    do
    {
        draw = m_engine();
    } while (draw >= limit);
    return lo + draw % range;
}

double RngStream::uniform01()
{
    return static_cast<double>(m_engine() >> 11) * 0x1.0p-53;
}

} // namespace cbfsim
