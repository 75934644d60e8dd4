#pragma once

#include <chrono>
#include <cstdint>

namespace cbfsim
{

/// Integer microsecond clock. Every timescale the model uses (slots, timers,
/// DCC gate, CBR windows) is an exact multiple of one microsecond.
struct SimClock
{
    using rep = std::int64_t;
    using period = std::micro;
    using duration = std::chrono::duration<rep, period>;
    using time_point = std::chrono::time_point<SimClock, duration>;
    static constexpr bool is_steady = true;
};

using Duration = SimClock::duration;
using SimTime = SimClock::time_point;

inline constexpr SimTime kSimStart{Duration{0}};

constexpr std::int64_t toMicros(SimTime t) noexcept
{
    return t.time_since_epoch().count();
}

constexpr SimTime fromMicros(std::int64_t us) noexcept
{
    return SimTime{Duration{us}};
}

constexpr double toSeconds(SimTime t) noexcept
{
    return static_cast<double>(toMicros(t)) * 1e-6;
}

constexpr double toSeconds(Duration d) noexcept
{
    return static_cast<double>(d.count()) * 1e-6;
}

} // namespace cbfsim
