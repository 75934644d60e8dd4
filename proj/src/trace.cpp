#include "cbfsim/trace.hpp"

#include <cstdio>

namespace cbfsim
{

const char* nameOf(TraceKind kind) noexcept
{
    switch (kind)
    {
    case TraceKind::TxStart: return "TxStart";
    case TraceKind::TxEnd: return "TxEnd";
    case TraceKind::RxDelivered: return "RxDelivered";
    case TraceKind::RxCollided: return "RxCollided";
    case TraceKind::CbfArm: return "CbfArm";
    case TraceKind::CbfCancel: return "CbfCancel";
    case TraceKind::CbfForward: return "CbfForward";
    case TraceKind::DplHit: return "DplHit";
    case TraceKind::QueueDrop: return "QueueDrop";
    case TraceKind::GateWait: return "GateWait";
    case TraceKind::HopLimitDrop: return "HopLimitDrop";
    }
    return "?";
}

CsvTraceWriter::CsvTraceWriter(std::ostream& out) : m_out(out)
{
    m_out << "t_us,node,kind,source,sn,hop,x,y\n";
}

void CsvTraceWriter::record(const TraceRecord& rec)
{
    char pos[64];
    std::snprintf(pos, sizeof pos, "%.2f,%.2f", rec.x, rec.y);
    m_out << toMicros(rec.t) << ',' << index(rec.node) << ',' << nameOf(rec.kind) << ',';
    if (rec.message)
    {
        m_out << index(rec.message->source) << ',' << rec.message->sn;
    }
    else
    {
        m_out << ',';
    }
    m_out << ',';
    if (rec.hopLimit > 0)
    {
        m_out << rec.hopLimit;
    }
    m_out << ',' << pos << '\n';
}

} // namespace cbfsim
