#pragma once

#include "cbfsim/time.hpp"

#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace cbfsim
{

enum class NodeId : std::uint32_t
{
};

constexpr std::uint32_t index(NodeId id) noexcept
{
    return static_cast<std::uint32_t>(id);
}

enum class Release : std::uint8_t
{
    R1,
    R2,
};

inline const char* nameOf(Release r) noexcept
{
    return r == Release::R1 ? "R1" : "R2";
}

/// EDCA traffic class; TC0 has the highest priority.
enum class TrafficClass : std::uint8_t
{
    TC0 = 0,
    TC1 = 1,
    TC2 = 2,
    TC3 = 3,
};

inline constexpr std::size_t kTrafficClassCount = 4;

/// Geo-state of a node as carried in GeoNetworking position vectors.
/// x runs along the road axis, y across it.
struct PositionVector
{
    double x = 0.0;
    double y = 0.0;
    double speed = 0.0;
    int heading = 1;
    SimTime at = kSimStart;
};

inline double distance(const PositionVector& a, const PositionVector& b) noexcept
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

/// (source, sequence number) pair that identifies one geo-broadcast message.
struct MessageId
{
    NodeId source{};
    std::uint16_t sn = 0;

    friend auto operator<=>(const MessageId&, const MessageId&) = default;
};

/// Axis-aligned rectangle with a closed boundary.
struct DestinationArea
{
    double centerX = 0.0;
    double centerY = 0.0;
    double halfLength = 2000.0;
    double halfWidth = 20.0;

    bool contains(double x, double y) const noexcept
    {
        return std::abs(x - centerX) <= halfLength && std::abs(y - centerY) <= halfWidth;
    }
    bool contains(const PositionVector& pv) const noexcept { return contains(pv.x, pv.y); }
};

} // namespace cbfsim

template <>
struct std::hash<cbfsim::MessageId>
{
    std::size_t operator()(const cbfsim::MessageId& id) const noexcept
    {
        return (static_cast<std::size_t>(cbfsim::index(id.source)) << 16) ^ id.sn;
    }
};
