#pragma once

#include "cbfsim/time.hpp"

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace cbfsim
{

enum class EventKind : std::uint8_t
{
    CamTrigger,
    DenmTrigger,
    CbfTimerExpiry,
    DccGateOpen,
    TxStart,
    TxEnd,
    RxEnd,
    CbrWindowEnd,
    MeasurementStart,
    MeasurementEnd,
};

const char* nameOf(EventKind kind) noexcept;

/// Identifies one scheduled event. A default-constructed handle refers to nothing.
class EventHandle
{
public:
    EventHandle() = default;

    bool valid() const noexcept { return m_seqno != kInvalid; }
    std::uint64_t seqno() const noexcept { return m_seqno; }

    friend bool operator==(EventHandle, EventHandle) = default;

private:
    friend class Scheduler;
    static constexpr std::uint64_t kInvalid = ~std::uint64_t{0};
    explicit EventHandle(std::uint64_t seqno) : m_seqno(seqno) {}
    std::uint64_t m_seqno = kInvalid;
};

/// Raised when an event is scheduled before the current clock. This is a
/// logic error in the model and aborts the run.
class SchedulingError : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

/// Single-threaded discrete-event core. Events are totally ordered by
/// (fire time, insertion sequence number).
class Scheduler
{
public:
    using Action = std::function<void()>;

    SimTime now() const noexcept { return m_now; }

    EventHandle schedule(SimTime fireAt, EventKind kind, Action action);
    EventHandle scheduleIn(Duration delay, EventKind kind, Action action)
    {
        return schedule(m_now + delay, kind, std::move(action));
    }

    /// True iff the event was pending and has now been removed.
    bool cancel(EventHandle handle);

    bool isPending(EventHandle handle) const { return m_pending.contains(handle.seqno()); }

    /// Processes every event with fire time <= end, including events scheduled
    /// while processing, then sets the clock to end.
    std::uint64_t runUntil(SimTime end);

    std::size_t pendingCount() const noexcept { return m_pending.size(); }
    std::uint64_t processedCount() const noexcept { return m_processed; }

private:
    struct Entry
    {
        SimTime fireAt;
        std::uint64_t seqno;
        EventKind kind;
        Action action;
    };

    struct Later
    {
        bool operator()(const Entry& a, const Entry& b) const noexcept
        {
            if (a.fireAt != b.fireAt)
            {
                return a.fireAt > b.fireAt;
            }
            return a.seqno > b.seqno;
        }
    };

    SimTime m_now = kSimStart;
    std::uint64_t m_nextSeqno = 0;
    std::uint64_t m_processed = 0;
    std::priority_queue<Entry, std::vector<Entry>, Later> m_queue;
    std::unordered_set<std::uint64_t> m_pending;
};

} // namespace cbfsim
