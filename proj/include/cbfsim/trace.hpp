#pragma once

#include "cbfsim/types.hpp"

#include <optional>
#include <ostream>
#include <vector>

namespace cbfsim
{

enum class TraceKind : std::uint8_t
{
    TxStart,
    TxEnd,
    RxDelivered,
    RxCollided,
    CbfArm,
    CbfCancel,
    CbfForward,
    DplHit,
    QueueDrop,
    GateWait,
    HopLimitDrop,
};

const char* nameOf(TraceKind kind) noexcept;

struct TraceRecord
{
    SimTime t = kSimStart;
    NodeId node{};
    TraceKind kind = TraceKind::TxStart;
    std::optional<MessageId> message;
    double x = 0.0;
    double y = 0.0;
    int hopLimit = 0; // hop limit on the air; TxStart of geo-broadcast frames only
};

class TraceSink
{
public:
    virtual ~TraceSink() = default;
    virtual void record(const TraceRecord& rec) = 0;
};

/// Fans records out to every attached sink in attachment order.
class TraceBus final : public TraceSink
{
public:
    void attach(TraceSink& sink) { m_sinks.push_back(&sink); }
    bool empty() const noexcept { return m_sinks.empty(); }
    void record(const TraceRecord& rec) override
    {
        for (TraceSink* sink : m_sinks)
        {
            sink->record(rec);
        }
    }

private:
    std::vector<TraceSink*> m_sinks;
};

/// Keeps every record; for tests and small scenarios.
class VectorTrace final : public TraceSink
{
public:
    void record(const TraceRecord& rec) override { m_records.push_back(rec); }
    const std::vector<TraceRecord>& records() const noexcept { return m_records; }

private:
    std::vector<TraceRecord> m_records;
};

/// Streams records as CSV lines: t_us,node,kind,source,sn,hop,x,y
class CsvTraceWriter final : public TraceSink
{
public:
    explicit CsvTraceWriter(std::ostream& out);
    void record(const TraceRecord& rec) override;

private:
    std::ostream& m_out;
};

} // namespace cbfsim
