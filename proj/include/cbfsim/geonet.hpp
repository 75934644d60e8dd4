#pragma once

#include "cbfsim/access.hpp"
#include "cbfsim/packet.hpp"
#include "cbfsim/scheduler.hpp"
#include "cbfsim/trace.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <unordered_map>

namespace cbfsim
{

/// Contention-timer constants.
struct CbfParams
{
    Duration toMax{100'000};
    Duration toMin{1'000};
    double distMax = 1000.0; // m

    void validate(double maxRange) const;
};

/// Release 1 timer: linear in progress on [0, distMax], floor beyond it.
Duration computeTimerR1(double progress, const CbfParams& p);

/// Release 2 timer: progress clamped at distMax (no discontinuity above it),
/// and never shorter than the wait until DCC lets the next frame out.
Duration computeTimerR2(double progress, const CbfParams& p, Duration dccWait);

/// True when a copy heard during contention came from a node that got at
/// least as far from the reference sender as this node. Ties cancel.
bool betterForwarder(const PositionVector& refSender, const PositionVector& dupSender, const PositionVector& self);

/// Duplicate packet list: per source, a FIFO of the most recent sequence numbers.
class DuplicatePacketList
{
public:
    static constexpr std::size_t kDefaultCapacity = 32;

    explicit DuplicatePacketList(std::size_t capacityPerSource = kDefaultCapacity) : m_capacity(capacityPerSource) {}

    bool contains(NodeId source, std::uint16_t sn) const;
    /// Inserts sn unless already present; evicts the oldest entry when full.
    void insert(NodeId source, std::uint16_t sn);
    std::size_t size(NodeId source) const;
    std::size_t capacity() const noexcept { return m_capacity; }

private:
    std::size_t m_capacity;
    std::unordered_map<NodeId, std::deque<std::uint16_t>> m_lists;
};

struct CbfEntry
{
    GbcPacket packet;
    EventHandle timer;
    SimTime armedAt = kSimStart;
    PositionVector refSenderPv;
    int receptions = 1;
};

enum class OriginateStatus : std::uint8_t
{
    Sent,
    QueueFull,
    SourceOutsideArea,
};

struct OriginateResult
{
    OriginateStatus status;
    MessageId id;
};

/// GeoNetworking router of one node: SHB for CAMs and Area CBF for GBC,
/// in either release.
class GeoNetRouter
{
public:
    using DeliveryHandler = std::function<void(NodeId self, const GbcPacket&, SimTime)>;

    GeoNetRouter(NodeId self, Release release, const CbfParams& params, Scheduler& scheduler, AccessLayer& access,
                 const Fleet& fleet, TraceSink& trace);

    GeoNetRouter(const GeoNetRouter&) = delete;
    GeoNetRouter& operator=(const GeoNetRouter&) = delete;

    /// Called for every GBC copy the router accepts as deliverable; the
    /// facilities layer de-duplicates.
    void setDeliveryHandler(DeliveryHandler handler) { m_deliver = std::move(handler); }

    OriginateResult originateGbc(std::uint32_t bytes, const DestinationArea& area);
    EnqueueResult sendShb(std::uint32_t bytes);

    /// Entry point for frames the channel delivered to this node.
    void onReceive(const Frame& frame);

    Release release() const noexcept { return m_release; }
    NodeId id() const noexcept { return m_self; }
    const CbfEntry* entry(MessageId id) const;
    const DuplicatePacketList& dpl() const noexcept { return m_dpl; }
    std::uint16_t nextSequenceNumber() const noexcept { return m_nextSn; }
    std::uint64_t shbReceived() const noexcept { return m_shbReceived; }

private:
    void receiveGbcR1(const GbcPacket& pkt);
    void receiveGbcR2(const GbcPacket& pkt);
    void arm(const GbcPacket& pkt, Duration timer);
    void cancel(MessageId id);
    void timerExpired(MessageId id);
    void trace(TraceKind kind, std::optional<MessageId> msg);
    PositionVector ownPosition() const;

    NodeId m_self;
    Release m_release;
    const CbfParams& m_params;
    Scheduler& m_scheduler;
    AccessLayer& m_access;
    const Fleet& m_fleet;
    TraceSink& m_trace;
    DeliveryHandler m_deliver;

    std::uint16_t m_nextSn = 0;
    std::unordered_map<MessageId, CbfEntry> m_entries;
    DuplicatePacketList m_dpl;
    std::uint64_t m_shbReceived = 0;
};

} // namespace cbfsim
