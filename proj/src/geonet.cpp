#include "cbfsim/geonet.hpp"

#include <algorithm>
#include <cmath>

namespace cbfsim
{

void CbfParams::validate(double maxRange) const
{
    if (!(toMin > Duration{0} && toMin < toMax))
    {
        throw ConfigError("cbf.to_min_ms/to_max_ms: need 0 < to_min < to_max");
    }
    if (!(distMax > 0.0 && distMax <= maxRange))
    {
        throw ConfigError("cbf.dist_max: must be positive and not exceed channel.max_range");
    }
}

Duration computeTimerR1(double progress, const CbfParams& p)
{
    if (progress > p.distMax)
    {
        return p.toMin;
    }
    const double span = static_cast<double>((p.toMax - p.toMin).count());
    const double reduction = span * std::max(0.0, progress) / p.distMax;
    return p.toMax - Duration{std::llround(reduction)};
}

Duration computeTimerR2(double progress, const CbfParams& p, Duration dccWait)
{
    const Duration base = computeTimerR1(std::min(progress, p.distMax), p);
    return std::max(base, dccWait);
}

bool betterForwarder(const PositionVector& refSender, const PositionVector& dupSender, const PositionVector& self)
{
    return distance(dupSender, refSender) >= distance(self, refSender);
}

bool DuplicatePacketList::contains(NodeId source, std::uint16_t sn) const
{
    const auto it = m_lists.find(source);
    if (it == m_lists.end())
    {
        return false;
    }
    return std::find(it->second.begin(), it->second.end(), sn) != it->second.end();
}

void DuplicatePacketList::insert(NodeId source, std::uint16_t sn)
{
    auto& fifo = m_lists[source];
    if (std::find(fifo.begin(), fifo.end(), sn) != fifo.end())
    {
        return;
    }
    fifo.push_back(sn);
    while (fifo.size() > m_capacity)
    {
        fifo.pop_front();
    }
}

std::size_t DuplicatePacketList::size(NodeId source) const
{
    const auto it = m_lists.find(source);
    return it == m_lists.end() ? 0 : it->second.size();
}

GeoNetRouter::GeoNetRouter(NodeId self, Release release, const CbfParams& params, Scheduler& scheduler,
                           AccessLayer& access, const Fleet& fleet, TraceSink& trace)
    : m_self(self), m_release(release), m_params(params), m_scheduler(scheduler), m_access(access), m_fleet(fleet),
      m_trace(trace)
{
}

PositionVector GeoNetRouter::ownPosition() const
{
    return m_fleet.positionAt(m_self, m_scheduler.now());
}

void GeoNetRouter::trace(TraceKind kind, std::optional<MessageId> msg)
{
    const PositionVector pv = ownPosition();
    m_trace.record(TraceRecord{m_scheduler.now(), m_self, kind, msg, pv.x, pv.y});
}

const CbfEntry* GeoNetRouter::entry(MessageId id) const
{
    const auto it = m_entries.find(id);
    return it == m_entries.end() ? nullptr : &it->second;
}

OriginateResult GeoNetRouter::originateGbc(std::uint32_t bytes, const DestinationArea& area)
{
    const PositionVector here = ownPosition();
    GbcPacket pkt;
    pkt.sourceId = m_self;
    pkt.sn = m_nextSn;
    if (!area.contains(here))
    {
        // Non-area forwarding towards a remote area is not modelled.
        return OriginateResult{OriginateStatus::SourceOutsideArea, pkt.id()};
    }
    ++m_nextSn;
    pkt.soPv = here;
    pkt.senderPv = here;
    pkt.area = area;
    pkt.hopLimit = kDefaultHopLimit;
    pkt.tc = TrafficClass::TC0;
    pkt.bytes = bytes;
    if (m_release == Release::R2)
    {
        m_dpl.insert(pkt.sourceId, pkt.sn);
    }
    const auto result = m_access.enqueue(pkt, TrafficClass::TC0);
    return OriginateResult{result == EnqueueResult::Accepted ? OriginateStatus::Sent : OriginateStatus::QueueFull,
                           pkt.id()};
}

EnqueueResult GeoNetRouter::sendShb(std::uint32_t bytes)
{
    return m_access.enqueue(ShbPacket{m_self, ownPosition(), bytes}, TrafficClass::TC2);
}

void GeoNetRouter::onReceive(const Frame& frame)
{
    if (std::holds_alternative<ShbPacket>(frame.payload))
    {
        // Single hop only: handed up, never forwarded.
        ++m_shbReceived;
        return;
    }
    const auto& pkt = std::get<GbcPacket>(frame.payload);
    if (pkt.sourceId == m_self)
    {
        return;
    }
    if (!pkt.area.contains(ownPosition()))
    {
        return;
    }
    if (m_release == Release::R1)
    {
        receiveGbcR1(pkt);
    }
    else
    {
        receiveGbcR2(pkt);
    }
}

void GeoNetRouter::receiveGbcR1(const GbcPacket& pkt)
{
    if (m_entries.contains(pkt.id()))
    {
        cancel(pkt.id());
        return;
    }
    // No duplicate memory outlives the buffered entry: a copy arriving after
    // this node forwarded or cancelled starts a fresh contention.
    const double progress = distance(ownPosition(), pkt.senderPv);
    arm(pkt, computeTimerR1(progress, m_params));
    if (m_deliver)
    {
        m_deliver(m_self, pkt, m_scheduler.now());
    }
}

void GeoNetRouter::receiveGbcR2(const GbcPacket& pkt)
{
    const MessageId id = pkt.id();
    if (const auto it = m_entries.find(id); it != m_entries.end())
    {
        CbfEntry& pending = it->second;
        ++pending.receptions;
        if (betterForwarder(pending.refSenderPv, pkt.senderPv, ownPosition()))
        {
            cancel(id);
        }
        return;
    }
    if (m_dpl.contains(pkt.sourceId, pkt.sn))
    {
        trace(TraceKind::DplHit, id);
        return;
    }
    m_dpl.insert(pkt.sourceId, pkt.sn);
    const SimTime now = m_scheduler.now();
    const Duration dccWait = m_access.nextPermittedTx(now) - now;
    const double progress = distance(ownPosition(), pkt.senderPv);
    arm(pkt, computeTimerR2(progress, m_params, dccWait));
    if (m_deliver)
    {
        m_deliver(m_self, pkt, now);
    }
}

void GeoNetRouter::arm(const GbcPacket& pkt, Duration timer)
{
    const MessageId id = pkt.id();
    CbfEntry e;
    e.packet = pkt;
    e.armedAt = m_scheduler.now();
    e.refSenderPv = pkt.senderPv;
    e.timer = m_scheduler.scheduleIn(timer, EventKind::CbfTimerExpiry, [this, id] { timerExpired(id); });
    m_entries.insert_or_assign(id, std::move(e));
    trace(TraceKind::CbfArm, id);
}

void GeoNetRouter::cancel(MessageId id)
{
    const auto it = m_entries.find(id);
    m_scheduler.cancel(it->second.timer);
    m_entries.erase(it);
    trace(TraceKind::CbfCancel, id);
}

void GeoNetRouter::timerExpired(MessageId id)
{
    const auto it = m_entries.find(id);
    GbcPacket pkt = std::move(it->second.packet);
    m_entries.erase(it);
    if (pkt.hopLimit <= 1)
    {
        trace(TraceKind::HopLimitDrop, id);
        return;
    }
    pkt.senderPv = ownPosition();
    pkt.hopLimit -= 1;
    pkt.tc = TrafficClass::TC3;
    trace(TraceKind::CbfForward, id);
    m_access.enqueue(std::move(pkt), TrafficClass::TC3);
}

} // namespace cbfsim
