#include "cbfsim/channel.hpp"

#include <algorithm>
#include <cmath>

namespace cbfsim
{

void ChannelConfig::validate() const
{
    if (!(maxRange > 0.0))
    {
        throw ConfigError("channel.max_range: must be positive");
    }
    if (!(dataRate > 0.0))
    {
        throw ConfigError("channel.data_rate: must be positive");
    }
    if (preambleOverhead < Duration{0})
    {
        throw ConfigError("channel.preamble_us: must be non-negative");
    }
    if (!(propagationSpeed > 0.0))
    {
        throw ConfigError("channel.propagation_speed: must be positive");
    }
}

RxOutcome resolveReception(const Interval& reception, std::span<const Interval> otherInRange)
{
    const bool hit = std::any_of(otherInRange.begin(), otherInRange.end(),
                                 [&](const Interval& other) { return other.overlaps(reception); });
    return hit ? RxOutcome::Collided : RxOutcome::Delivered;
}

Channel::Channel(ChannelConfig cfg, const Fleet& fleet, Scheduler& scheduler)
    : m_cfg(cfg), m_fleet(fleet), m_scheduler(scheduler), m_meters(fleet.size())
{
    m_cfg.validate();
    double maxSpeed = 0.0;
    for (const auto& node : fleet.nodes())
    {
        maxSpeed = std::max(maxSpeed, fleet.initial(node.id).speed);
    }
    m_slack = maxSpeed * toSeconds(m_indexPeriod) + 1.0;
    m_bucketWidth = m_cfg.maxRange + 2.0 * m_slack;
    m_maxDelay = propagationDelay(m_cfg.maxRange);
    m_byDelay.resize(static_cast<std::size_t>(m_maxDelay.count()) + 1);
}

Duration Channel::airtime(std::uint32_t bytes) const
{
    const double payloadUs = static_cast<double>(bytes) * 8.0 / m_cfg.dataRate * 1e6;
    return m_cfg.preambleOverhead + Duration{std::llround(payloadUs)};
}

Duration Channel::propagationDelay(double meters) const
{
    return Duration{std::llround(meters / m_cfg.propagationSpeed * 1e6)};
}

void Channel::refreshIndex(SimTime t)
{
    if (m_indexBuiltAt && t - *m_indexBuiltAt < m_indexPeriod)
    {
        return;
    }
    m_indexBuiltAt = t;
    const double road = m_fleet.roadLength();
    const auto bucketCount = static_cast<std::size_t>(std::ceil(road / m_bucketWidth)) + 1;
    m_buckets.assign(bucketCount, {});
    m_edgeNodes.clear();
    for (const auto& node : m_fleet.nodes())
    {
        const PositionVector pv = m_fleet.positionAt(node.id, t);
        // Vehicles near the seam of the ring may wrap before the next rebuild.
        if (pv.speed > 0.0 && (pv.x < m_slack || pv.x > road - m_slack))
        {
            m_edgeNodes.push_back(node.id);
            continue;
        }
        const auto b = static_cast<long>(std::floor(pv.x / m_bucketWidth));
        if (b < 0 || b >= static_cast<long>(bucketCount))
        {
            m_edgeNodes.push_back(node.id);
            continue;
        }
        m_buckets[static_cast<std::size_t>(b)].push_back(node.id);
    }
}

std::optional<Interval> Channel::arrivalAt(NodeId node, const Frame& frame) const
{
    if (node == frame.txNode)
    {
        return Interval{frame.txStart, frame.txEnd()};
    }
    const double d = distance(frame.originPv, m_fleet.positionAt(node, frame.txStart));
    if (d > m_cfg.maxRange)
    {
        return std::nullopt;
    }
    const Duration delay = propagationDelay(d);
    return Interval{frame.txStart + delay, frame.txEnd() + delay};
}

void Channel::prune(SimTime now)
{
    // Anything that ended this long ago can no longer overlap a pending reception.
    const Duration keep = 2 * m_longestAirtime + propagationDelay(m_cfg.maxRange) + Duration{1000};
    while (!m_active.empty() && m_active.front().frame->txEnd() + keep < now)
    {
        m_active.pop_front();
    }
}

std::size_t Channel::transmit(NodeId tx, GnPdu payload)
{
    const SimTime now = m_scheduler.now();
    prune(now);

    auto frame = std::make_shared<Frame>();
    frame->txNode = tx;
    frame->bytes = bytesOf(payload);
    frame->txStart = now;
    frame->airtime = airtime(frame->bytes);
    frame->originPv = m_fleet.positionAt(tx, now);
    frame->payload = std::move(payload);
    m_longestAirtime = std::max(m_longestAirtime, frame->airtime);
    std::shared_ptr<const Frame> shared = std::move(frame);
    m_active.push_back(ActiveFrame{shared});
    ++m_framesSent;

    const bool wantsReceptions =
        std::holds_alternative<GbcPacket>(shared->payload) || m_cfg.resolveShbReceptions;
    std::size_t scheduled = 0;
    forEachInRange(shared->originPv, now, [&](NodeId id, double d) {
        const Duration delay = id == tx ? Duration{0} : propagationDelay(d);
        const SimTime arrive = now + delay;
        const SimTime leave = shared->txEnd() + delay;

        BusyMeter& meter = m_meters[index(id)];
        const SimTime from = std::max(arrive, meter.busyUntil);
        if (leave > from)
        {
            meter.accumulated += leave - from;
            meter.busyUntil = leave;
        }

        if (id != tx && wantsReceptions)
        {
            m_byDelay[static_cast<std::size_t>(delay.count())].push_back(id);
            ++scheduled;
        }
    });
    // Receivers sharing a delay finish at the same instant: one event each
    // group, receivers kept in discovery order.
    for (std::size_t us = 0; us < m_byDelay.size(); ++us)
    {
        if (m_byDelay[us].empty())
        {
            continue;
        }
        const Duration delay{static_cast<Duration::rep>(us)};
        m_scheduler.schedule(shared->txEnd() + delay, EventKind::RxEnd,
                             [this, delay, shared, receivers = std::move(m_byDelay[us])] {
                                 finishReceptions(receivers, delay, shared);
                             });
        m_byDelay[us].clear();
    }
    m_receptions += scheduled;
    return scheduled;
}

void Channel::finishReceptions(const std::vector<NodeId>& receivers, Duration delay,
                               const std::shared_ptr<const Frame>& frame)
{
    const Interval own{frame->txStart + delay, frame->txEnd() + delay};
    for (const NodeId rx : receivers)
    {
        RxOutcome outcome = RxOutcome::Delivered;
        for (const ActiveFrame& other : m_active)
        {
            if (other.frame == frame || !mayOverlap(*other.frame, own.begin, own.end))
            {
                continue;
            }
            if (const auto iv = arrivalAt(rx, *other.frame); iv && iv->overlaps(own))
            {
                outcome = RxOutcome::Collided;
                break;
            }
        }
        if (m_onReceive)
        {
            m_onReceive(rx, *frame, outcome);
        }
    }
}

bool Channel::isBusy(NodeId node, SimTime t) const
{
    return std::any_of(m_active.begin(), m_active.end(), [&](const ActiveFrame& f) {
        if (!mayOverlap(*f.frame, t, t + Duration{1}))
        {
            return false;
        }
        const auto iv = arrivalAt(node, *f.frame);
        return iv && iv->covers(t);
    });
}

SimTime Channel::busyUntil(NodeId node, SimTime t) const
{
    SimTime until = t;
    bool extended = true;
    while (extended)
    {
        extended = false;
        for (const ActiveFrame& f : m_active)
        {
            if (!mayOverlap(*f.frame, until, until + Duration{1}))
            {
                continue;
            }
            const auto iv = arrivalAt(node, *f.frame);
            if (iv && iv->covers(until))
            {
                until = iv->end;
                extended = true;
            }
        }
    }
    return until;
}

std::optional<SimTime> Channel::firstArrivalBetween(NodeId node, SimTime after, SimTime before) const
{
    std::optional<SimTime> first;
    for (const ActiveFrame& f : m_active)
    {
        if (!mayOverlap(*f.frame, after, before))
        {
            continue;
        }
        const auto iv = arrivalAt(node, *f.frame);
        if (iv && iv->begin > after && iv->begin < before && (!first || iv->begin < *first))
        {
            first = iv->begin;
        }
    }
    return first;
}

Duration Channel::takeBusyTime(NodeId node, SimTime windowEnd)
{
    BusyMeter& meter = m_meters[index(node)];
    const Duration carry = std::max(Duration{0}, meter.busyUntil - windowEnd);
    const Duration inWindow = meter.accumulated - carry;
    meter.accumulated = carry;
    return std::max(Duration{0}, inWindow);
}

} // namespace cbfsim
