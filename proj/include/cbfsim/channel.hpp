#pragma once

#include "cbfsim/mobility.hpp"
#include "cbfsim/packet.hpp"
#include "cbfsim/scheduler.hpp"

#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace cbfsim
{

struct ChannelConfig
{
    double maxRange = 1500.0;       // m, unit-disk reception and carrier-sense range
    double dataRate = 6e6;          // bit/s
    Duration preambleOverhead{40};  // PLCP preamble + header
    double propagationSpeed = 3e8;  // m/s
    // SHB frames only add channel load unless someone listens for them; the
    // per-receiver reception events are skipped by default.
    bool resolveShbReceptions = false;

    void validate() const;
};

enum class RxOutcome : std::uint8_t
{
    Delivered,
    Collided,
};

/// Half-open interval [begin, end) of signal presence at one receiver.
struct Interval
{
    SimTime begin;
    SimTime end;

    bool overlaps(const Interval& o) const noexcept { return begin < o.end && o.begin < end; }
    bool covers(SimTime t) const noexcept { return begin <= t && t < end; }
};

/// No-capture rule: the reception survives only if nothing else in range
/// overlapped it at this receiver.
RxOutcome resolveReception(const Interval& reception, std::span<const Interval> otherInRange);

/// Broadcast medium with unit-disk propagation, per-receiver collision
/// bookkeeping and carrier sensing.
class Channel
{
public:
    using ReceiveHandler = std::function<void(NodeId rx, const Frame&, RxOutcome)>;

    Channel(ChannelConfig cfg, const Fleet& fleet, Scheduler& scheduler);

    const ChannelConfig& config() const noexcept { return m_cfg; }

    Duration airtime(std::uint32_t bytes) const;
    Duration propagationDelay(double meters) const;

    void setReceiveHandler(ReceiveHandler handler) { m_onReceive = std::move(handler); }

    /// Puts a frame on the air at the current clock. txStart, airtime and
    /// originPv are filled in here. Returns the number of receptions scheduled.
    std::size_t transmit(NodeId tx, GnPdu payload);

    /// Carrier sense: some in-range signal is present at node at time t.
    bool isBusy(NodeId node, SimTime t) const;

    /// End of the contiguous busy period containing t, or t when idle.
    SimTime busyUntil(NodeId node, SimTime t) const;

    /// Earliest in-range signal arrival at node strictly inside (after, before).
    std::optional<SimTime> firstArrivalBetween(NodeId node, SimTime after, SimTime before) const;

    /// Busy time sensed by node inside [windowStart, windowEnd); resets the
    /// node's meter for the next window.
    Duration takeBusyTime(NodeId node, SimTime windowEnd);

    /// Calls fn(id, distance) for every node within max range of origin at
    /// time t (the origin node itself included when it is part of the fleet).
    template <typename Fn>
    void forEachInRange(const PositionVector& origin, SimTime t, Fn&& fn);

    std::uint64_t framesSent() const noexcept { return m_framesSent; }
    std::uint64_t receptionsScheduled() const noexcept { return m_receptions; }

private:
    struct ActiveFrame
    {
        std::shared_ptr<const Frame> frame;
    };

    struct BusyMeter
    {
        SimTime busyUntil = kSimStart;
        Duration accumulated{0};
    };

    std::optional<Interval> arrivalAt(NodeId node, const Frame& frame) const;
    // Cheap time-only test: frame's signal can be present somewhere in [begin, end).
    bool mayOverlap(const Frame& frame, SimTime begin, SimTime end) const
    {
        return frame.txStart < end && frame.txEnd() + m_maxDelay > begin;
    }
    void refreshIndex(SimTime t);
    void prune(SimTime now);
    void finishReceptions(const std::vector<NodeId>& receivers, Duration delay,
                          const std::shared_ptr<const Frame>& frame);

    ChannelConfig m_cfg;
    const Fleet& m_fleet;
    Scheduler& m_scheduler;
    ReceiveHandler m_onReceive;

    std::deque<ActiveFrame> m_active;
    Duration m_longestAirtime{0};
    Duration m_maxDelay{0};
    std::vector<std::vector<NodeId>> m_byDelay; // scratch, indexed by delay in us
    std::vector<BusyMeter> m_meters;

    // Spatial buckets keyed by road position, rebuilt when stale.
    double m_bucketWidth = 0.0;
    double m_slack = 0.0;
    Duration m_indexPeriod{100'000};
    std::optional<SimTime> m_indexBuiltAt;
    std::vector<std::vector<NodeId>> m_buckets;
    std::vector<NodeId> m_edgeNodes;

    std::uint64_t m_framesSent = 0;
    std::uint64_t m_receptions = 0;
};

template <typename Fn>
void Channel::forEachInRange(const PositionVector& origin, SimTime t, Fn&& fn)
{
    refreshIndex(t);
    auto visit = [&](const std::vector<NodeId>& ids) {
        for (const NodeId id : ids)
        {
            const double d = distance(origin, m_fleet.positionAt(id, t));
            if (d <= m_cfg.maxRange)
            {
                fn(id, d);
            }
        }
    };
    const auto bucket = static_cast<long>(std::floor(origin.x / m_bucketWidth));
    for (long b = bucket - 1; b <= bucket + 1; ++b)
    {
        if (b >= 0 && b < static_cast<long>(m_buckets.size()))
        {
            visit(m_buckets[static_cast<std::size_t>(b)]);
        }
    }
    visit(m_edgeNodes);
}

} // namespace cbfsim
