#pragma once

#include "cbfsim/facilities.hpp"
#include "cbfsim/mobility.hpp"
#include "cbfsim/trace.hpp"

#include <map>
#include <optional>
#include <span>
#include <vector>

namespace cbfsim
{

/// Fixed-width bins across the destination area, labelled by signed
/// distance from the source along the road axis.
class DistanceBins
{
public:
    DistanceBins(const DestinationArea& area, double sourceX, double binWidth);

    std::size_t count() const noexcept { return m_count; }
    std::optional<std::size_t> binOf(double x) const;
    /// Lower edge of bin i, relative to the source.
    double label(std::size_t i) const;

private:
    double m_start;
    double m_sourceX;
    double m_width;
    std::size_t m_count;
};

struct MessageReport
{
    MessageId id;
    SimTime generatedAt = kSimStart;
    SimTime validUntil = kSimStart;
    std::size_t denominator = 0;  // vehicles in the area at generation, source excluded
    std::size_t receptions = 0;   // of those, how many received within the lifetime
    std::size_t txCount = 0;      // source plus every forwarding transmission
    std::vector<std::size_t> binExpected;
    std::vector<std::size_t> binReceptions; // includes newcomers
};

/// Receivers counted in the denominator, over the denominator.
double computePdr(const MessageReport& report);

/// Transmissions carrying this message (source and forwarders, repeats included).
std::size_t computeTxCount(const MessageReport& report);

/// Same count taken straight from a recorded trace.
std::size_t countTransmissions(std::span<const TraceRecord> trace, MessageId id);

/// Online metrics for one run.
class MetricsCollector final : public TraceSink, public FacilitiesListener
{
public:
    MetricsCollector(const Fleet& fleet, const DestinationArea& area, double binWidth = 100.0);

    void record(const TraceRecord& rec) override;
    void onMessageGenerated(const GeneratedMessage& msg) override;
    void onFirstDelivery(NodeId node, MessageId msg, SimTime at) override;

    std::vector<MessageReport> reports() const;
    const DistanceBins& bins() const noexcept { return m_bins; }

private:
    struct Tracked
    {
        MessageReport report;
        std::vector<bool> inDenominator;
    };

    const Fleet& m_fleet;
    DestinationArea m_area;
    DistanceBins m_bins;
    std::map<MessageId, Tracked> m_messages;
};

struct BinRow
{
    double distance;
    double meanPdr;
};

/// Per-bin receptions over expected receivers, averaged over every message
/// in every report set. Bins that never had an expected receiver are omitted.
std::vector<BinRow> pdrDistanceBins(std::span<const std::vector<MessageReport>> runs, const DistanceBins& layout);

} // namespace cbfsim
