#include "cbfsim/geonet.hpp"

#include "../rig.hpp"
#include "../support.hpp"

using namespace cbfsim;
using namespace testrig;
using namespace std::chrono_literals;

namespace
{

// Oracle for the linear contention timer, in microseconds.
double linearTimerUs(double progress)
{
    return 100'000.0 - (100'000.0 - 1'000.0) * progress / 1000.0;
}

PositionVector at(double x)
{
    return PositionVector{x, 0.0, 0.0, 1, kSimStart};
}

} // namespace

TEST_CASE("Release 1 timer boundaries and midpoint")
{
    const CbfParams p;
    CHECK(computeTimerR1(0.0, p) == 100ms);
    CHECK(computeTimerR1(1000.0, p) == 1ms);
    CHECK(computeTimerR1(500.0, p) == 50'500us);
    CHECK(static_cast<double>(computeTimerR1(500.0, p).count()) == doctest::Approx(linearTimerUs(500.0)));
    CHECK(computeTimerR1(1000.5, p) == 1ms);
}

TEST_CASE("Release 2 timer: clamp at the maximum distance, never below the DCC wait")
{
    const CbfParams p;
    CHECK(computeTimerR2(1400.0, p, 0us) == 1ms);
    CHECK(computeTimerR2(500.0, p, 80ms) == 80ms);
    CHECK(computeTimerR2(500.0, p, 10ms) == 50'500us);
    CHECK(computeTimerR2(0.0, p, 0us) == 100ms);
}

TEST_CASE("better forwarder geometry")
{
    const PositionVector ref = at(0.0);
    const PositionVector self = at(500.0);
    CHECK(betterForwarder(ref, at(600.0), self));
    CHECK_FALSE(betterForwarder(ref, at(200.0), self));
    CHECK(betterForwarder(ref, self, self));
}

TEST_CASE("duplicate packet list keeps the last 32 per source")
{
    DuplicatePacketList dpl;
    dpl.insert(NodeId{4}, 7);
    CHECK(dpl.contains(NodeId{4}, 7));
    CHECK_FALSE(dpl.contains(NodeId{4}, 8));
    CHECK_FALSE(dpl.contains(NodeId{5}, 7));

    DuplicatePacketList fifo;
    for (std::uint16_t sn = 0; sn <= 32; ++sn)
    {
        fifo.insert(NodeId{1}, sn);
    }
    CHECK(fifo.size(NodeId{1}) == 32);
    CHECK_FALSE(fifo.contains(NodeId{1}, 0));
    CHECK(fifo.contains(NodeId{1}, 1));
    CHECK(fifo.contains(NodeId{1}, 32));

    // Re-inserting a present entry does not refresh it.
    DuplicatePacketList again(2);
    again.insert(NodeId{1}, 1);
    again.insert(NodeId{1}, 2);
    again.insert(NodeId{1}, 1);
    again.insert(NodeId{1}, 3);
    CHECK_FALSE(again.contains(NodeId{1}, 1));
}

TEST_CASE("Release 1: first copy arms, copy during contention cancels")
{
    Simulation sim(quietConfig(), staticFleet({0.0, 500.0}, {Release::R1}), 1);
    VectorTrace trace;
    sim.attachTrace(trace);
    GeoNetRouter& r = sim.router(NodeId{1});
    const GbcPacket pkt = gbcFrom(NodeId{0}, 0, at(0.0), sim.config().area);
    r.onReceive(frameOf(NodeId{0}, pkt, kSimStart));
    const CbfEntry* e = r.entry(pkt.id());
    REQUIRE(e != nullptr);
    CHECK(sim.scheduler().isPending(e->timer));
    const auto timer = e->timer;

    sim.scheduler().runUntil(kSimStart + 50'499us);
    CHECK(countKind(trace.records(), TraceKind::CbfForward) == 0);
    r.onReceive(frameOf(NodeId{0}, pkt, sim.scheduler().now()));
    CHECK(r.entry(pkt.id()) == nullptr);
    CHECK_FALSE(sim.scheduler().isPending(timer));
    sim.scheduler().runUntil(kSimStart + 1s);
    CHECK(countKind(trace.records(), TraceKind::CbfForward) == 0);
}

TEST_CASE("Release 1 timer fires at 50.5 ms for 500 m of progress")
{
    Simulation sim(quietConfig(), staticFleet({0.0, 500.0}, {Release::R1}), 1);
    VectorTrace trace;
    sim.attachTrace(trace);
    const GbcPacket pkt = gbcFrom(NodeId{0}, 0, at(0.0), sim.config().area);
    sim.router(NodeId{1}).onReceive(frameOf(NodeId{0}, pkt, kSimStart));
    sim.scheduler().runUntil(kSimStart + 1s);
    REQUIRE(countKind(trace.records(), TraceKind::CbfForward) == 1);
    for (const auto& rec : trace.records())
    {
        if (rec.kind == TraceKind::CbfForward)
        {
            CHECK(rec.t == kSimStart + 50'500us);
        }
    }
}

TEST_CASE("delayed duplicate after forwarding: Release 1 re-arms, Release 2 does not")
{
    for (const Release release : {Release::R1, Release::R2})
    {
        CAPTURE(nameOf(release));
        Simulation sim(quietConfig(), staticFleet({0.0, 500.0}, {release}), 1);
        VectorTrace trace;
        sim.attachTrace(trace);
        GeoNetRouter& r = sim.router(NodeId{1});
        const GbcPacket pkt = gbcFrom(NodeId{0}, 0, at(0.0), sim.config().area);
        r.onReceive(frameOf(NodeId{0}, pkt, kSimStart));
        sim.scheduler().runUntil(kSimStart + 200ms);
        REQUIRE(countKind(trace.records(), TraceKind::CbfForward, NodeId{1}) == 1);

        r.onReceive(frameOf(NodeId{0}, pkt, sim.scheduler().now()));
        if (release == Release::R1)
        {
            CHECK(r.entry(pkt.id()) != nullptr);
            CHECK(countKind(trace.records(), TraceKind::CbfArm, NodeId{1}) == 2);
        }
        else
        {
            CHECK(r.entry(pkt.id()) == nullptr);
            CHECK(countKind(trace.records(), TraceKind::CbfArm, NodeId{1}) == 1);
            CHECK(countKind(trace.records(), TraceKind::DplHit, NodeId{1}) == 1);
        }
    }
}

TEST_CASE("Release 2: worse forwarder keeps the timer, better forwarder cancels it")
{
    Simulation sim(quietConfig(), staticFleet({0.0, 500.0, 200.0, 600.0}, {Release::R2}), 1);
    GeoNetRouter& r = sim.router(NodeId{1});
    const DestinationArea area = sim.config().area;
    const GbcPacket pkt = gbcFrom(NodeId{0}, 0, at(0.0), area);
    r.onReceive(frameOf(NodeId{0}, pkt, kSimStart));
    REQUIRE(r.entry(pkt.id()) != nullptr);
    CHECK(r.dpl().contains(NodeId{0}, 0));

    GbcPacket worse = pkt;
    worse.senderPv = at(200.0);
    r.onReceive(frameOf(NodeId{2}, worse, kSimStart + 1ms));
    REQUIRE(r.entry(pkt.id()) != nullptr);
    CHECK(r.entry(pkt.id())->receptions == 2);

    GbcPacket better = pkt;
    better.senderPv = at(600.0);
    r.onReceive(frameOf(NodeId{3}, better, kSimStart + 2ms));
    CHECK(r.entry(pkt.id()) == nullptr);
}

TEST_CASE("Release 2 timer honours the DCC wait")
{
    Simulation sim(quietConfig(), staticFleet({0.0, 500.0, 900.0}, {Release::R2}), 1);
    VectorTrace trace;
    sim.attachTrace(trace);
    // Node 1 transmits something first, closing its gate for 25 ms after tx end.
    sim.router(NodeId{1}).sendShb(285);
    sim.scheduler().runUntil(kSimStart + 1ms);
    const SimTime gate = sim.access(NodeId{1}).dcc().gateNext;
    // CAM airtime: 40 us + 285 * 8 / 6 us = 420 us.
    CHECK(gate == kSimStart + 39us + 420us + 25ms);

    // A copy whose sender is 990 m away: base timer 1.99 ms, so the gate wins.
    const GbcPacket pkt = gbcFrom(NodeId{0}, 0, at(-490.0), sim.config().area);
    sim.router(NodeId{1}).onReceive(frameOf(NodeId{0}, pkt, sim.scheduler().now()));
    sim.scheduler().runUntil(kSimStart + 1s);
    bool seen = false;
    for (const auto& rec : trace.records())
    {
        if (rec.kind == TraceKind::CbfForward && rec.node == NodeId{1})
        {
            CHECK(rec.t == gate);
            seen = true;
        }
    }
    CHECK(seen);
}

TEST_CASE("hop limit: decrement and TC3 on forward, drop when exhausted")
{
    // 0 -> 1 forwards; node 2 (beyond node 0's range) hears only node 1's copy.
    Simulation sim(quietConfig(0.0, 5000.0), staticFleet({0.0, 1000.0, 2000.0}, {Release::R1}), 1);
    VectorTrace trace;
    sim.attachTrace(trace);
    const GbcPacket pkt = gbcFrom(NodeId{0}, 0, at(0.0), sim.config().area, 10);
    sim.router(NodeId{1}).onReceive(frameOf(NodeId{0}, pkt, kSimStart));
    sim.scheduler().runUntil(kSimStart + 2ms);
    const CbfEntry* e = sim.router(NodeId{2}).entry(pkt.id());
    REQUIRE(e != nullptr);
    CHECK(e->packet.hopLimit == 9);
    CHECK(e->packet.tc == TrafficClass::TC3);
    CHECK(e->packet.senderPv.x == doctest::Approx(1000.0));

    Simulation last(quietConfig(), staticFleet({0.0, 1000.0, 2000.0}, {Release::R1}), 1);
    VectorTrace lastTrace;
    last.attachTrace(lastTrace);
    const GbcPacket tired = gbcFrom(NodeId{0}, 1, at(0.0), last.config().area, 1);
    last.router(NodeId{1}).onReceive(frameOf(NodeId{0}, tired, kSimStart));
    last.scheduler().runUntil(kSimStart + 1s);
    CHECK(countKind(lastTrace.records(), TraceKind::HopLimitDrop) == 1);
    CHECK(countKind(lastTrace.records(), TraceKind::TxStart) == 0);
}

TEST_CASE("origination: sequence numbers, hop limit, class, scope guard")
{
    Simulation sim(quietConfig(), staticFleet({0.0, 700.0}, {Release::R2}), 1);
    GeoNetRouter& src = sim.router(NodeId{0});
    const auto first = src.originateGbc(301, sim.config().area);
    CHECK(first.status == OriginateStatus::Sent);
    CHECK(first.id.sn == 0);
    sim.scheduler().runUntil(kSimStart + 1s);
    const auto second = src.originateGbc(301, sim.config().area);
    CHECK(second.id.sn == 1);
    sim.scheduler().runUntil(kSimStart + 2s);

    const CbfEntry* heard = sim.router(NodeId{1}).entry(first.id);
    CHECK(heard == nullptr); // long since forwarded
    CHECK(sim.router(NodeId{1}).dpl().contains(NodeId{0}, 0));
    CHECK(sim.router(NodeId{1}).dpl().contains(NodeId{0}, 1));

    const DestinationArea elsewhere{50'000.0, 0.0, 100.0, 20.0};
    const auto rejected = src.originateGbc(301, elsewhere);
    CHECK(rejected.status == OriginateStatus::SourceOutsideArea);
    CHECK(src.nextSequenceNumber() == 2);
}

TEST_CASE("originated packet carries hop limit 10 at TC0")
{
    Simulation sim(quietConfig(), staticFleet({0.0, 700.0}, {Release::R1}), 1);
    VectorTrace trace;
    sim.attachTrace(trace);
    const auto res = sim.router(NodeId{0}).originateGbc(301, sim.config().area);
    sim.scheduler().runUntil(kSimStart + 1ms);
    const CbfEntry* e = sim.router(NodeId{1}).entry(res.id);
    REQUIRE(e != nullptr);
    CHECK(e->packet.hopLimit == 10);
    CHECK(e->packet.tc == TrafficClass::TC0);
    // TC0 AIFS: two slots.
    CHECK(trace.records().front().t == kSimStart + 26us);
}

TEST_CASE("single-hop broadcast: TC2 and never forwarded")
{
    SimulationConfig cfg = quietConfig();
    cfg.channel.resolveShbReceptions = true;
    Simulation sim(cfg, staticFleet({0.0, 700.0}, {Release::R1}), 1);
    VectorTrace trace;
    sim.attachTrace(trace);
    CHECK(sim.router(NodeId{1}).sendShb(285) == EnqueueResult::Accepted);
    sim.scheduler().runUntil(kSimStart + 1s);
    REQUIRE(countKind(trace.records(), TraceKind::TxStart) == 1);
    // TC2 AIFS: three slots.
    CHECK(trace.records().front().t == kSimStart + 39us);
    CHECK(sim.router(NodeId{0}).shbReceived() == 1);
    CHECK(countKind(trace.records(), TraceKind::CbfArm) == 0);
}

TEST_CASE("own packets and receptions outside the area are ignored")
{
    Simulation sim(quietConfig(0.0, 300.0), staticFleet({0.0, 200.0, 800.0}, {Release::R1}), 1);
    const GbcPacket pkt = gbcFrom(NodeId{0}, 0, at(0.0), sim.config().area);
    sim.router(NodeId{0}).onReceive(frameOf(NodeId{1}, pkt, kSimStart));
    CHECK(sim.router(NodeId{0}).entry(pkt.id()) == nullptr);
    sim.router(NodeId{2}).onReceive(frameOf(NodeId{0}, pkt, kSimStart));
    CHECK(sim.router(NodeId{2}).entry(pkt.id()) == nullptr);
    sim.router(NodeId{1}).onReceive(frameOf(NodeId{0}, pkt, kSimStart));
    CHECK(sim.router(NodeId{1}).entry(pkt.id()) != nullptr);
}
