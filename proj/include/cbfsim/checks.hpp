#pragma once

#include "cbfsim/mobility.hpp"
#include "cbfsim/trace.hpp"

#include <deque>
#include <map>
#include <unordered_map>
#include <vector>

namespace cbfsim
{

/// Watches TxStart/TxEnd pairs and verifies the DCC gate contract: every
/// node leaves at least `minGate` plus the previous airtime between
/// consecutive transmission starts.
class GateContractChecker final : public TraceSink
{
public:
    GateContractChecker(std::size_t nodes, Duration minGate);

    void record(const TraceRecord& rec) override;

    std::uint64_t gapsChecked() const noexcept { return m_gaps; }
    std::uint64_t violations() const noexcept { return m_violations; }
    /// Largest per-node share of [0, horizon] spent transmitting.
    double maxOccupancy(Duration horizon) const;

private:
    struct NodeState
    {
        std::optional<SimTime> lastStart;
        std::optional<SimTime> lastEnd;
        Duration airtime{0};
    };

    Duration m_minGate;
    std::vector<NodeState> m_nodes;
    std::uint64_t m_gaps = 0;
    std::uint64_t m_violations = 0;
};

/// Protocol-level trace assertions for the forwarding algorithm.
///  - an R2 node never arms twice for a message still in its duplicate list
///    (the list is re-modelled here from the arm records, FIFO per source);
///  - R2 forwards of a message never outnumber R2 nodes that armed for it.
class ForwardingChecker final : public TraceSink
{
public:
    explicit ForwardingChecker(const Fleet& fleet, std::size_t dplCapacity = 32);

    void record(const TraceRecord& rec) override;

    std::uint64_t r2Arms() const noexcept { return m_r2Arms; }
    std::uint64_t r1Rearms() const noexcept { return m_r1Rearms; }
    std::uint64_t reentryViolations() const noexcept { return m_reentry; }
    /// Messages for which R2 forwards exceeded R2 armers.
    std::uint64_t forwardBoundViolations() const;

private:
    const Fleet& m_fleet;
    std::size_t m_capacity;
    std::unordered_map<std::uint64_t, std::deque<std::uint16_t>> m_dpl; // (node, source) -> sns
    std::map<MessageId, std::unordered_map<std::uint32_t, int>> m_armsPerNode;
    std::map<MessageId, std::pair<std::uint64_t, std::uint64_t>> m_r2ArmersForwards;
    std::uint64_t m_r2Arms = 0;
    std::uint64_t m_r1Rearms = 0;
    std::uint64_t m_reentry = 0;
};

} // namespace cbfsim
