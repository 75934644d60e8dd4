#include "cbfsim/scheduler.hpp"

#include <string>

namespace cbfsim
{

const char* nameOf(EventKind kind) noexcept
{
    switch (kind)
    {
    case EventKind::CamTrigger: return "CamTrigger";
    case EventKind::DenmTrigger: return "DenmTrigger";
    case EventKind::CbfTimerExpiry: return "CbfTimerExpiry";
    case EventKind::DccGateOpen: return "DccGateOpen";
    case EventKind::TxStart: return "TxStart";
    case EventKind::TxEnd: return "TxEnd";
    case EventKind::RxEnd: return "RxEnd";
    case EventKind::CbrWindowEnd: return "CbrWindowEnd";
    case EventKind::MeasurementStart: return "MeasurementStart";
    case EventKind::MeasurementEnd: return "MeasurementEnd";
    }
    return "?";
}

EventHandle Scheduler::schedule(SimTime fireAt, EventKind kind, Action action)
{
    if (fireAt < m_now)
    {
        throw SchedulingError("event " + std::string(nameOf(kind)) + " scheduled at " +
                              std::to_string(toMicros(fireAt)) + " us, clock is at " +
                              std::to_string(toMicros(m_now)) + " us");
    }
    const std::uint64_t seqno = m_nextSeqno++;
    m_queue.push(Entry{fireAt, seqno, kind, std::move(action)});
    m_pending.insert(seqno);
    return EventHandle{seqno};
}

bool Scheduler::cancel(EventHandle handle)
{
    if (!handle.valid())
    {
        return false;
    }
    // The heap entry stays behind and is skipped when popped.
    return m_pending.erase(handle.seqno()) > 0;
}

std::uint64_t Scheduler::runUntil(SimTime end)
{
    if (end < m_now)
    {
        throw SchedulingError("runUntil target lies in the past");
    }
    std::uint64_t count = 0;
    while (!m_queue.empty() && m_queue.top().fireAt <= end)
    {
        // priority_queue::top is const; the entry is popped right after.
        Entry entry = std::move(const_cast<Entry&>(m_queue.top()));
        m_queue.pop();
        if (m_pending.erase(entry.seqno) == 0)
        {
            continue;
        }
        m_now = entry.fireAt;
        entry.action();
        ++count;
        ++m_processed;
    }
    m_now = end;
    return count;
}

} // namespace cbfsim
