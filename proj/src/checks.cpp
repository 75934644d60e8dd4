#include "cbfsim/checks.hpp"

#include <algorithm>

namespace cbfsim
{

GateContractChecker::GateContractChecker(std::size_t nodes, Duration minGate) : m_minGate(minGate), m_nodes(nodes)
{
}

void GateContractChecker::record(const TraceRecord& rec)
{
    if (rec.kind != TraceKind::TxStart && rec.kind != TraceKind::TxEnd)
    {
        return;
    }
    NodeState& node = m_nodes.at(index(rec.node));
    if (rec.kind == TraceKind::TxEnd)
    {
        node.lastEnd = rec.t;
        if (node.lastStart)
        {
            node.airtime += rec.t - *node.lastStart;
        }
        return;
    }
    if (node.lastStart && node.lastEnd)
    {
        ++m_gaps;
        const Duration previousAirtime = *node.lastEnd - *node.lastStart;
        if (rec.t - *node.lastStart < previousAirtime + m_minGate)
        {
            ++m_violations;
        }
    }
    node.lastStart = rec.t;
    node.lastEnd.reset();
}

double GateContractChecker::maxOccupancy(Duration horizon) const
{
    double worst = 0.0;
    for (const NodeState& node : m_nodes)
    {
        worst = std::max(worst, static_cast<double>(node.airtime.count()) / static_cast<double>(horizon.count()));
    }
    return worst;
}

ForwardingChecker::ForwardingChecker(const Fleet& fleet, std::size_t dplCapacity)
    : m_fleet(fleet), m_capacity(dplCapacity)
{
}

void ForwardingChecker::record(const TraceRecord& rec)
{
    if (!rec.message || (rec.kind != TraceKind::CbfArm && rec.kind != TraceKind::CbfForward))
    {
        return;
    }
    const MessageId msg = *rec.message;
    const bool r2 = m_fleet.node(rec.node).release == Release::R2;
    if (rec.kind == TraceKind::CbfForward)
    {
        if (r2)
        {
            ++m_r2ArmersForwards[msg].second;
        }
        return;
    }

    int& arms = m_armsPerNode[msg][index(rec.node)];
    ++arms;
    if (!r2)
    {
        if (arms > 1)
        {
            ++m_r1Rearms;
        }
        return;
    }
    ++m_r2Arms;
    if (arms == 1)
    {
        ++m_r2ArmersForwards[msg].first;
    }
    const std::uint64_t key = (static_cast<std::uint64_t>(index(rec.node)) << 32) | index(msg.source);
    auto& fifo = m_dpl[key];
    if (std::find(fifo.begin(), fifo.end(), msg.sn) != fifo.end())
    {
        ++m_reentry;
        return;
    }
    fifo.push_back(msg.sn);
    while (fifo.size() > m_capacity)
    {
        fifo.pop_front();
    }
}

std::uint64_t ForwardingChecker::forwardBoundViolations() const
{
    return static_cast<std::uint64_t>(std::count_if(m_r2ArmersForwards.begin(), m_r2ArmersForwards.end(),
                                                    [](const auto& kv) { return kv.second.second > kv.second.first; }));
}

} // namespace cbfsim
