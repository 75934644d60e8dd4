#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>

namespace cbfsim
{

/// Named pseudo-random stream. The engine is mt19937_64 (fully specified by
/// the standard); the distributions below are hand-rolled because the
/// standard library distributions are implementation-defined, and the same
/// (seed, stream id) must give the same draws everywhere.
class RngStream
{
public:
    RngStream(std::uint64_t seed, std::string_view streamId);

    std::uint64_t seed() const noexcept { return m_seed; }
    std::string_view streamId() const noexcept { return m_streamId; }

    std::uint64_t next() { return m_engine(); }

    /// Uniform integer in [lo, hi], inclusive, without modulo bias.
    std::uint64_t uniformInt(std::uint64_t lo, std::uint64_t hi);

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01();

    template <typename T>
    void shuffle(std::span<T> values)
    {
        for (std::size_t i = values.size(); i > 1; --i)
        {
            const auto j = static_cast<std::size_t>(uniformInt(0, i - 1));
            using std::swap;
            swap(values[i - 1], values[j]);
        }
    }

private:
    std::uint64_t m_seed;
    std::string m_streamId;
    std::mt19937_64 m_engine;
};

namespace streams
{
inline constexpr std::string_view kPlacement = "placement";
inline constexpr std::string_view kFleetAssignment = "fleet-assignment";
inline constexpr std::string_view kBackoff = "backoff";
} // namespace streams

} // namespace cbfsim
