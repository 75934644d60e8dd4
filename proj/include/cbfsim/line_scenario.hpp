#pragma once

#include "cbfsim/simulation.hpp"

#include <vector>

namespace cbfsim
{

/// Static nodes on a straight line, the first one being the source. One
/// DENM at t = 0, no CAMs, zero backoff, DCC gate open at start.
struct LineScenario
{
    std::vector<double> positions{0.0, 300.0, 600.0, 900.0, 1200.0};
    Release release = Release::R1;
    SimTime end{std::chrono::seconds{2}};
};

struct ForwardEvent
{
    NodeId node;
    SimTime decidedAt; // contention timer expiry
    SimTime txStart;
};

struct LineOutcome
{
    SimTime sourceTxStart = kSimStart;
    std::vector<ForwardEvent> forwards;
    std::vector<TraceRecord> trace;
};

Fleet lineFleet(const LineScenario& scenario);
SimulationConfig lineSimulationConfig(const LineScenario& scenario);
LineOutcome runLineScenario(const LineScenario& scenario);

} // namespace cbfsim
