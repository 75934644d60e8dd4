#pragma once

#include "cbfsim/types.hpp"

#include <cstdint>
#include <optional>
#include <variant>

namespace cbfsim
{

inline constexpr int kDefaultHopLimit = 10;

/// Single-hop broadcast (carries CAMs). Never forwarded.
struct ShbPacket
{
    NodeId source{};
    PositionVector sourcePv;
    std::uint32_t bytes = 0;
};

/// Area geo-broadcast packet. The wire format is identical for both
/// releases; only receiver logic differs.
struct GbcPacket
{
    NodeId sourceId{};
    std::uint16_t sn = 0;
    PositionVector soPv;     // source
    PositionVector senderPv; // last hop, rewritten on every forward
    DestinationArea area;
    int hopLimit = kDefaultHopLimit;
    TrafficClass tc = TrafficClass::TC0;
    std::uint32_t bytes = 0;

    MessageId id() const noexcept { return MessageId{sourceId, sn}; }
};

using GnPdu = std::variant<ShbPacket, GbcPacket>;

inline std::optional<MessageId> messageOf(const GnPdu& pdu)
{
    if (const auto* gbc = std::get_if<GbcPacket>(&pdu))
    {
        return gbc->id();
    }
    return std::nullopt;
}

inline std::uint32_t bytesOf(const GnPdu& pdu)
{
    return std::visit([](const auto& p) { return p.bytes; }, pdu);
}

/// One transmission on the medium.
struct Frame
{
    NodeId txNode{};
    std::uint32_t bytes = 0;
    SimTime txStart = kSimStart;
    Duration airtime{0};
    PositionVector originPv;
    GnPdu payload;

    SimTime txEnd() const noexcept { return txStart + airtime; }
};

} // namespace cbfsim
