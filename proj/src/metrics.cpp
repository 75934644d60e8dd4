#include "cbfsim/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace cbfsim
{

DistanceBins::DistanceBins(const DestinationArea& area, double sourceX, double binWidth)
    : m_start(area.centerX - area.halfLength), m_sourceX(sourceX), m_width(binWidth),
      m_count(static_cast<std::size_t>(std::ceil(2.0 * area.halfLength / binWidth - 1e-9)))
{
    if (!(binWidth > 0.0))
    {
        throw ConfigError("experiment.bin_width: must be positive");
    }
}

std::optional<std::size_t> DistanceBins::binOf(double x) const
{
    const double offset = x - m_start;
    if (offset < 0.0)
    {
        return std::nullopt;
    }
    const auto i = static_cast<std::size_t>(std::floor(offset / m_width));
    if (i < m_count)
    {
        return i;
    }
    // The far boundary belongs to the last bin (closed area).
    if (offset <= static_cast<double>(m_count) * m_width + 1e-9)
    {
        return m_count - 1;
    }
    return std::nullopt;
}

double DistanceBins::label(std::size_t i) const
{
    return m_start + static_cast<double>(i) * m_width - m_sourceX;
}

double computePdr(const MessageReport& report)
{
    if (report.denominator == 0)
    {
        return 0.0;
    }
    return static_cast<double>(report.receptions) / static_cast<double>(report.denominator);
}

std::size_t computeTxCount(const MessageReport& report)
{
    return report.txCount;
}

std::size_t countTransmissions(std::span<const TraceRecord> trace, MessageId id)
{
    return static_cast<std::size_t>(std::count_if(trace.begin(), trace.end(), [&](const TraceRecord& r) {
        return r.kind == TraceKind::TxStart && r.message && *r.message == id;
    }));
}

MetricsCollector::MetricsCollector(const Fleet& fleet, const DestinationArea& area, double binWidth)
    : m_fleet(fleet), m_area(area), m_bins(area, fleet.initial(fleet.source()).x, binWidth)
{
}

void MetricsCollector::record(const TraceRecord& rec)
{
    if (rec.kind != TraceKind::TxStart || !rec.message)
    {
        return;
    }
    if (const auto it = m_messages.find(*rec.message); it != m_messages.end())
    {
        ++it->second.report.txCount;
    }
}

void MetricsCollector::onMessageGenerated(const GeneratedMessage& msg)
{
    Tracked tracked;
    tracked.report.id = msg.id;
    tracked.report.generatedAt = msg.generatedAt;
    tracked.report.validUntil = msg.validUntil;
    tracked.report.binExpected.assign(m_bins.count(), 0);
    tracked.report.binReceptions.assign(m_bins.count(), 0);
    tracked.inDenominator.assign(m_fleet.size(), false);
    for (const auto& node : m_fleet.nodes())
    {
        if (node.id == msg.id.source)
        {
            continue;
        }
        const PositionVector pv = m_fleet.positionAt(node.id, msg.generatedAt);
        if (!m_area.contains(pv))
        {
            continue;
        }
        tracked.inDenominator[index(node.id)] = true;
        ++tracked.report.denominator;
        if (const auto bin = m_bins.binOf(pv.x))
        {
            ++tracked.report.binExpected[*bin];
        }
    }
    m_messages.insert_or_assign(msg.id, std::move(tracked));
}

void MetricsCollector::onFirstDelivery(NodeId node, MessageId msg, SimTime at)
{
    const auto it = m_messages.find(msg);
    if (it == m_messages.end())
    {
        return;
    }
    Tracked& tracked = it->second;
    if (tracked.inDenominator[index(node)])
    {
        ++tracked.report.receptions;
    }
    const PositionVector pv = m_fleet.positionAt(node, at);
    if (m_area.contains(pv))
    {
        if (const auto bin = m_bins.binOf(pv.x))
        {
            ++tracked.report.binReceptions[*bin];
        }
    }
}

std::vector<MessageReport> MetricsCollector::reports() const
{
    std::vector<MessageReport> out;
    out.reserve(m_messages.size());
    for (const auto& [id, tracked] : m_messages)
    {
        out.push_back(tracked.report);
    }
    return out;
}

std::vector<BinRow> pdrDistanceBins(std::span<const std::vector<MessageReport>> runs, const DistanceBins& layout)
{
    std::vector<double> sum(layout.count(), 0.0);
    std::vector<std::size_t> samples(layout.count(), 0);
    for (const auto& reports : runs)
    {
        for (const auto& report : reports)
        {
            for (std::size_t i = 0; i < layout.count() && i < report.binExpected.size(); ++i)
            {
                if (report.binExpected[i] == 0)
                {
                    continue;
                }
                sum[i] += static_cast<double>(report.binReceptions[i]) / static_cast<double>(report.binExpected[i]);
                ++samples[i];
            }
        }
    }
    std::vector<BinRow> rows;
    for (std::size_t i = 0; i < layout.count(); ++i)
    {
        if (samples[i] > 0)
        {
            rows.push_back(BinRow{layout.label(i), sum[i] / static_cast<double>(samples[i])});
        }
    }
    return rows;
}

} // namespace cbfsim
