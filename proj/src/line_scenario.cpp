#include "cbfsim/line_scenario.hpp"

#include <algorithm>
#include <map>

namespace cbfsim
{

Fleet lineFleet(const LineScenario& scenario)
{
    std::vector<VehicleNode> nodes;
    std::vector<PositionVector> initial;
    for (std::size_t i = 0; i < scenario.positions.size(); ++i)
    {
        nodes.push_back(VehicleNode{NodeId{static_cast<std::uint32_t>(i)}, 0, scenario.release, i == 0});
        initial.push_back(PositionVector{scenario.positions[i], 0.0, 0.0, 1, kSimStart});
    }
    const auto [lo, hi] = std::minmax_element(scenario.positions.begin(), scenario.positions.end());
    return Fleet(std::move(nodes), std::move(initial), *hi - *lo + 10'000.0);
}

SimulationConfig lineSimulationConfig(const LineScenario& scenario)
{
    SimulationConfig cfg;
    cfg.cam.enabled = false;
    for (auto& edca : cfg.access.edca)
    {
        edca.cwMin = 0;
    }
    const auto [lo, hi] = std::minmax_element(scenario.positions.begin(), scenario.positions.end());
    cfg.area.centerX = (*lo + *hi) / 2.0;
    cfg.area.centerY = 0.0;
    cfg.area.halfLength = (*hi - *lo) / 2.0 + 100.0;
    cfg.area.halfWidth = 10.0;
    cfg.denmStart = kSimStart;
    cfg.denmCount = 1;
    cfg.end = scenario.end;
    return cfg;
}

LineOutcome runLineScenario(const LineScenario& scenario)
{
    Simulation sim(lineSimulationConfig(scenario), lineFleet(scenario), 1);
    VectorTrace trace;
    sim.attachTrace(trace);
    sim.run();

    LineOutcome out;
    out.trace = trace.records();
    std::map<std::uint32_t, std::vector<SimTime>> decisions;
    bool sourceSeen = false;
    for (const auto& rec : out.trace)
    {
        if (rec.kind == TraceKind::CbfForward)
        {
            decisions[index(rec.node)].push_back(rec.t);
        }
        if (rec.kind == TraceKind::TxStart && rec.message)
        {
            if (rec.node == sim.fleet().source() && !sourceSeen)
            {
                out.sourceTxStart = rec.t;
                sourceSeen = true;
                continue;
            }
            auto& pending = decisions[index(rec.node)];
            const SimTime decided = pending.empty() ? rec.t : pending.front();
            if (!pending.empty())
            {
                pending.erase(pending.begin());
            }
            out.forwards.push_back(ForwardEvent{rec.node, decided, rec.t});
        }
    }
    return out;
}

} // namespace cbfsim
