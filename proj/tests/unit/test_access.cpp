#include "cbfsim/access.hpp"

#include "../rig.hpp"
#include "../support.hpp"

#include <map>

using namespace cbfsim;
using namespace testrig;
using namespace std::chrono_literals;

namespace
{

struct TxLog final : TraceSink
{
    void record(const TraceRecord& r) override
    {
        if (r.kind == TraceKind::TxStart)
        {
            starts.push_back({r.node, r.t, r.message});
        }
        if (r.kind == TraceKind::RxCollided)
        {
            ++collided;
        }
        if (r.kind == TraceKind::RxDelivered)
        {
            ++delivered;
        }
    }
    struct Start
    {
        NodeId node;
        SimTime t;
        std::optional<MessageId> msg;
    };
    std::vector<Start> from(NodeId node) const
    {
        std::vector<Start> out;
        for (const auto& s : starts)
        {
            if (s.node == node)
            {
                out.push_back(s);
            }
        }
        return out;
    }
    std::vector<Start> starts;
    int collided = 0;
    int delivered = 0;
};

GnPdu denm(NodeId from, std::uint16_t sn, const DestinationArea& area)
{
    return gbcFrom(from, sn, PositionVector{}, area);
}

} // namespace

TEST_CASE("idle channel and zero backoff: transmission after AIFS")
{
    Simulation sim(quietConfig(), staticFleet({0.0, 100.0}, {Release::R1}), 1);
    TxLog log;
    sim.attachTrace(log);
    CHECK(sim.access(NodeId{0}).enqueue(denm(NodeId{0}, 0, sim.config().area), TrafficClass::TC0) ==
          EnqueueResult::Accepted);
    sim.scheduler().runUntil(kSimStart + 1ms);
    REQUIRE(log.starts.size() == 1);
    CHECK(log.starts[0].t == kSimStart + 2 * 13us);
}

TEST_CASE("gate bookkeeping: next frame waits until tx end plus 25 ms")
{
    Simulation sim(quietConfig(), staticFleet({0.0, 100.0}, {Release::R1}), 1);
    TxLog log;
    sim.attachTrace(log);
    AccessLayer& a = sim.access(NodeId{0});
    a.enqueue(denm(NodeId{0}, 0, sim.config().area), TrafficClass::TC0);
    a.enqueue(denm(NodeId{0}, 1, sim.config().area), TrafficClass::TC0);
    sim.scheduler().runUntil(kSimStart + 1ms);
    const SimTime txEnd = kSimStart + 26us + 441us;
    CHECK(a.dcc().gateNext == txEnd + 25ms);
    CHECK(a.nextPermittedTx(sim.scheduler().now()) == txEnd + 25ms);
    sim.scheduler().runUntil(kSimStart + 100ms);
    const auto mine = log.from(NodeId{0});
    REQUIRE(mine.size() == 2);
    CHECK(mine[1].t == txEnd + 25ms + 26us);
}

TEST_CASE("queue capacity: fifth frame into a full queue is dropped")
{
    Simulation sim(quietConfig(), staticFleet({0.0, 100.0}, {Release::R1}), 1);
    AccessLayer& a = sim.access(NodeId{0});
    a.enqueue(denm(NodeId{0}, 0, sim.config().area), TrafficClass::TC0);
    sim.scheduler().runUntil(kSimStart + 1ms); // sent; gate now closed
    for (std::uint16_t sn = 1; sn <= 4; ++sn)
    {
        CHECK(a.enqueue(denm(NodeId{0}, sn, sim.config().area), TrafficClass::TC0) == EnqueueResult::Accepted);
    }
    CHECK(a.queued(TrafficClass::TC0) == 4);
    CHECK(a.enqueue(denm(NodeId{0}, 5, sim.config().area), TrafficClass::TC0) == EnqueueResult::DroppedQueueFull);
    CHECK(a.drops() == 1);
    // Other classes have their own queues.
    CHECK(a.enqueue(denm(NodeId{0}, 6, sim.config().area), TrafficClass::TC3) == EnqueueResult::Accepted);
}

TEST_CASE("TC0 leaves before TC3 when both wait at the gate")
{
    Simulation sim(quietConfig(), staticFleet({0.0, 100.0}, {Release::R1}), 1);
    TxLog log;
    sim.attachTrace(log);
    AccessLayer& a = sim.access(NodeId{0});
    a.enqueue(denm(NodeId{0}, 0, sim.config().area), TrafficClass::TC0);
    sim.scheduler().runUntil(kSimStart + 1ms);
    a.enqueue(denm(NodeId{0}, 3, sim.config().area), TrafficClass::TC3);
    a.enqueue(denm(NodeId{0}, 1, sim.config().area), TrafficClass::TC0);
    sim.scheduler().runUntil(kSimStart + 200ms);
    const auto mine = log.from(NodeId{0});
    REQUIRE(mine.size() == 3);
    CHECK(mine[1].msg->sn == 1);
    CHECK(mine[2].msg->sn == 3);
}

TEST_CASE("busy channel at dequeue defers past the busy period")
{
    Simulation sim(quietConfig(), staticFleet({0.0, 300.0}, {Release::R1}), 1);
    TxLog log;
    sim.attachTrace(log);
    sim.access(NodeId{1}).enqueue(denm(NodeId{1}, 0, sim.config().area), TrafficClass::TC0);
    sim.scheduler().schedule(kSimStart + 100us, EventKind::DenmTrigger, [&] {
        sim.access(NodeId{0}).enqueue(denm(NodeId{0}, 0, sim.config().area), TrafficClass::TC0);
    });
    sim.scheduler().runUntil(kSimStart + 5ms);
    REQUIRE(log.starts.size() == 2);
    // Node 1 starts at 26 us; its frame reaches node 0 after 1 us and lasts 441 us.
    const SimTime busyEnd = kSimStart + 26us + 1us + 441us;
    CHECK(log.starts[1].node == NodeId{0});
    CHECK(log.starts[1].t == busyEnd + 26us);
    CHECK(log.collided == 0);
}

TEST_CASE("different backoff draws avoid a collision")
{
    // Find a seed whose first two backoff draws (TC0, window 0..3) differ,
    // using an independent stream as the oracle for the draws.
    std::uint64_t seed = 1;
    std::uint64_t d0 = 0;
    std::uint64_t d1 = 0;
    for (;; ++seed)
    {
        RngStream oracle(seed, streams::kBackoff);
        d0 = oracle.uniformInt(0, 3);
        d1 = oracle.uniformInt(0, 3);
        if (d0 != d1)
        {
            break;
        }
    }
    SimulationConfig cfg = quietConfig();
    cfg.access.edca[0].cwMin = 3;
    Simulation sim(cfg, staticFleet({0.0, 300.0, 150.0}, {Release::R1}), seed);
    TxLog log;
    sim.attachTrace(log);
    sim.access(NodeId{0}).enqueue(denm(NodeId{0}, 0, cfg.area), TrafficClass::TC0);
    sim.access(NodeId{1}).enqueue(denm(NodeId{1}, 0, cfg.area), TrafficClass::TC0);
    sim.scheduler().runUntil(kSimStart + 5ms);
    REQUIRE(log.starts.size() == 2);
    const NodeId first = d0 < d1 ? NodeId{0} : NodeId{1};
    CHECK(log.starts[0].node == first);
    CHECK(log.starts[0].t == kSimStart + 26us + static_cast<long>(std::min(d0, d1)) * 13us);
    CHECK(log.starts[1].t >= log.starts[0].t + 441us);
    CHECK(log.collided == 0);
    CHECK(log.delivered == 4);
}

TEST_CASE("CBR window drives the duty cycle")
{
    Simulation sim(quietConfig(), staticFleet({0.0, 100.0}, {Release::R1}), 1);
    AccessLayer& a = sim.access(NodeId{1});
    // Idle windows: duty stays at the ceiling.
    a.onCbrWindowEnd(kSimStart + 100ms);
    CHECK(a.dcc().cbr == doctest::Approx(0.0));
    CHECK(a.dcc().duty == doctest::Approx(0.03));
}
