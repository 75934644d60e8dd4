#include "cbfsim/access.hpp"

#include <algorithm>
#include <string>

namespace cbfsim
{

void AccessConfig::validate() const
{
    for (std::size_t tc = 0; tc < kTrafficClassCount; ++tc)
    {
        const std::string prefix = "access.tc" + std::to_string(tc) + ".";
        if (queueCapacity[tc] == 0)
        {
            throw ConfigError(prefix + "queue_capacity: must be at least 1");
        }
        if (edca[tc].aifsSlots < 0)
        {
            throw ConfigError(prefix + "aifs: must be non-negative");
        }
        if (edca[tc].cwMin < 0)
        {
            throw ConfigError(prefix + "cw_min: must be non-negative");
        }
    }
    if (slot <= Duration{0})
    {
        throw ConfigError("access.slot_us: must be positive");
    }
    dcc.validate();
}

AccessLayer::AccessLayer(NodeId self, const AccessConfig& cfg, Scheduler& scheduler, Channel& channel,
                         const Fleet& fleet, RngStream& backoff, TraceSink& trace)
    : m_self(self), m_cfg(cfg), m_scheduler(scheduler), m_channel(channel), m_fleet(fleet), m_backoff(backoff),
      m_trace(trace)
{
    m_dcc.duty = cfg.dcc.initialDuty;
}

void AccessLayer::trace(TraceKind kind, const std::optional<MessageId>& msg)
{
    const SimTime now = m_scheduler.now();
    const PositionVector pv = m_fleet.positionAt(m_self, now);
    m_trace.record(TraceRecord{now, m_self, kind, msg, pv.x, pv.y});
}

EnqueueResult AccessLayer::enqueue(GnPdu pdu, TrafficClass tc)
{
    auto& queue = m_queues[static_cast<std::size_t>(tc)];
    if (queue.size() >= m_cfg.queueCapacity[static_cast<std::size_t>(tc)])
    {
        ++m_drops;
        trace(TraceKind::QueueDrop, messageOf(pdu));
        return EnqueueResult::DroppedQueueFull;
    }
    const auto msg = messageOf(pdu);
    queue.push_back(std::move(pdu));
    if (m_scheduler.now() < m_dcc.gateNext)
    {
        trace(TraceKind::GateWait, msg);
    }
    tryDequeue();
    return EnqueueResult::Accepted;
}

void AccessLayer::armGate()
{
    if (m_scheduler.isPending(m_gateEvent))
    {
        return;
    }
    m_gateEvent = m_scheduler.schedule(m_dcc.gateNext, EventKind::DccGateOpen, [this] { tryDequeue(); });
}

void AccessLayer::tryDequeue()
{
    if (m_inflight)
    {
        return;
    }
    const auto next = std::find_if(m_queues.begin(), m_queues.end(), [](const auto& q) { return !q.empty(); });
    if (next == m_queues.end())
    {
        return;
    }
    if (m_scheduler.now() < m_dcc.gateNext)
    {
        armGate();
        return;
    }
    const auto tc = static_cast<TrafficClass>(next - m_queues.begin());
    const auto cw = static_cast<std::uint64_t>(edca(tc).cwMin);
    m_inflight = Pending{std::move(next->front()), tc, m_backoff.uniformInt(0, cw)};
    next->pop_front();
    contend();
}

void AccessLayer::contend()
{
    const SimTime now = m_scheduler.now();
    if (m_channel.isBusy(m_self, now))
    {
        m_scheduler.schedule(m_channel.busyUntil(m_self, now), EventKind::TxStart, [this] { contend(); });
        return;
    }
    m_countdownFrom = now;
    const Duration wait = edca(m_inflight->tc).aifsSlots * m_cfg.slot +
                          static_cast<Duration::rep>(m_inflight->slotsLeft) * m_cfg.slot;
    m_scheduler.schedule(now + wait, EventKind::TxStart, [this] { attempt(); });
}

void AccessLayer::attempt()
{
    const SimTime now = m_scheduler.now();
    if (const auto sensed = m_channel.firstArrivalBetween(m_self, m_countdownFrom, now))
    {
        // Freeze the countdown: slots that fully elapsed after AIFS are spent.
        const Duration idle = *sensed - m_countdownFrom - edca(m_inflight->tc).aifsSlots * m_cfg.slot;
        if (idle > Duration{0})
        {
            const auto spent = static_cast<std::uint64_t>(idle / m_cfg.slot);
            m_inflight->slotsLeft -= std::min(m_inflight->slotsLeft, spent);
        }
        const SimTime resume = std::max(now, m_channel.busyUntil(m_self, *sensed));
        m_scheduler.schedule(resume, EventKind::TxStart, [this] { contend(); });
        return;
    }
    startTransmission();
}

void AccessLayer::startTransmission()
{
    const SimTime now = m_scheduler.now();
    const auto msg = messageOf(m_inflight->pdu);
    const Duration airtime = m_channel.airtime(bytesOf(m_inflight->pdu));
    m_dcc.lastTxAirtime = airtime;
    m_dcc.gateNext = now + airtime + gateInterval(m_dcc.duty, airtime, m_cfg.dcc);
    ++m_transmissions;
    {
        const PositionVector pv = m_fleet.positionAt(m_self, now);
        TraceRecord rec{now, m_self, TraceKind::TxStart, msg, pv.x, pv.y};
        if (const auto* gbc = std::get_if<GbcPacket>(&m_inflight->pdu))
        {
            rec.hopLimit = gbc->hopLimit;
        }
        m_trace.record(rec);
    }
    m_channel.transmit(m_self, m_inflight->pdu);
    m_scheduler.schedule(now + airtime, EventKind::TxEnd, [this] { finishTransmission(); });
}

void AccessLayer::finishTransmission()
{
    const auto msg = messageOf(m_inflight->pdu);
    m_inflight.reset();
    trace(TraceKind::TxEnd, msg);
    tryDequeue();
}

void AccessLayer::onCbrWindowEnd(SimTime windowEnd)
{
    const Duration busy = m_channel.takeBusyTime(m_self, windowEnd);
    const double fraction = static_cast<double>(busy.count()) / static_cast<double>(m_cfg.dcc.cbrWindow.count());
    m_dcc.cbr = smoothCbr(m_dcc.cbr, fraction, m_cfg.dcc);
    m_dcc.duty = updateDuty(m_dcc.duty, m_dcc.cbr, m_cfg.dcc);
}

} // namespace cbfsim
