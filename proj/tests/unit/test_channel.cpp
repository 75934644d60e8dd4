#include "cbfsim/channel.hpp"

#include "../support.hpp"

#include <map>
#include <vector>

using namespace cbfsim;
using namespace std::chrono_literals;

namespace
{

// Static nodes on the x axis; node 0 is the (stationary) source.
Fleet staticLine(const std::vector<double>& xs)
{
    std::vector<VehicleNode> nodes;
    std::vector<PositionVector> pv;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        nodes.push_back(VehicleNode{NodeId{static_cast<std::uint32_t>(i)}, 0, Release::R1, i == 0});
        pv.push_back(PositionVector{xs[i], 0.0, 0.0, 1, kSimStart});
    }
    return Fleet(std::move(nodes), std::move(pv), 100'000.0);
}

GnPdu gbc(NodeId from, std::uint16_t sn, std::uint32_t bytes = 301)
{
    GbcPacket p;
    p.sourceId = from;
    p.sn = sn;
    p.bytes = bytes;
    return p;
}

struct Rig
{
    explicit Rig(const std::vector<double>& xs) : fleet(staticLine(xs)), channel(ChannelConfig{}, fleet, scheduler)
    {
        channel.setReceiveHandler([this](NodeId rx, const Frame& f, RxOutcome o) {
            outcomes[{index(rx), index(f.txNode)}] = o;
        });
    }

    void sendAt(SimTime t, std::uint32_t node, std::uint16_t sn)
    {
        scheduler.schedule(t, EventKind::TxStart, [this, node, sn] { channel.transmit(NodeId{node}, gbc(NodeId{node}, sn)); });
    }

    Scheduler scheduler;
    Fleet fleet;
    Channel channel;
    std::map<std::pair<std::uint32_t, std::uint32_t>, RxOutcome> outcomes; // (rx, tx)
};

} // namespace

TEST_CASE("airtime of a 301-byte frame at 6 Mbit/s")
{
    Rig rig({0.0});
    // Oracle: 40 us preamble + 301 * 8 bits / 6 bit-per-us = 40 + 401.33
    const double expected = 40.0 + 301.0 * 8.0 / 6.0;
    CHECK(rig.channel.airtime(301).count() == static_cast<long>(expected + 0.5));
    CHECK(rig.channel.airtime(301) == 441us);
    CHECK(rig.channel.propagationDelay(1500.0) == 5us);
}

TEST_CASE("range cutoff at the maximum range")
{
    Rig rig({0.0, 1500.0, 1501.0});
    rig.sendAt(kSimStart, 0, 0);
    rig.scheduler.runUntil(kSimStart + 10ms);
    CHECK(rig.channel.receptionsScheduled() == 1);
    CHECK(rig.outcomes.contains({1, 0}));
    CHECK_FALSE(rig.outcomes.contains({2, 0}));
}

TEST_CASE("lone transmitter schedules no receptions")
{
    Rig rig({0.0});
    rig.scheduler.schedule(kSimStart, EventKind::TxStart, [&] { CHECK(rig.channel.transmit(NodeId{0}, gbc(NodeId{0}, 0)) == 0); });
    rig.scheduler.runUntil(kSimStart + 1ms);
    CHECK(rig.outcomes.empty());
}

TEST_CASE("single frame without overlap is delivered")
{
    Rig rig({0.0, 100.0});
    rig.sendAt(kSimStart, 0, 0);
    rig.scheduler.runUntil(kSimStart + 1ms);
    CHECK(rig.outcomes.at({1, 0}) == RxOutcome::Delivered);
}

TEST_CASE("one microsecond of overlap destroys both frames; back-to-back frames survive")
{
    // Transmitters at 0 and 200 m, receiver midway: equal (sub-microsecond) delays.
    Rig overlap({0.0, 100.0, 200.0});
    overlap.sendAt(kSimStart, 0, 0);
    overlap.sendAt(kSimStart + 440us, 2, 0);
    overlap.scheduler.runUntil(kSimStart + 2ms);
    CHECK(overlap.outcomes.at({1, 0}) == RxOutcome::Collided);
    CHECK(overlap.outcomes.at({1, 2}) == RxOutcome::Collided);
    // Half duplex: node 2 was transmitting while node 0's frame arrived.
    CHECK(overlap.outcomes.at({2, 0}) == RxOutcome::Collided);

    Rig apart({0.0, 100.0, 200.0});
    apart.sendAt(kSimStart, 0, 0);
    apart.sendAt(kSimStart + 441us, 2, 0);
    apart.scheduler.runUntil(kSimStart + 2ms);
    CHECK(apart.outcomes.at({1, 0}) == RxOutcome::Delivered);
    CHECK(apart.outcomes.at({1, 2}) == RxOutcome::Delivered);
}

TEST_CASE("collisions are resolved per receiver")
{
    // T1 at 0, A at 1000, T2 at 2000, B at -1000 (index order: T1, A, T2, B).
    // A hears both transmitters; B hears only T1.
    Rig rig({0.0, 1000.0, 2000.0, -1000.0});
    rig.sendAt(kSimStart, 0, 0);
    rig.sendAt(kSimStart + 100us, 2, 0);
    rig.scheduler.runUntil(kSimStart + 2ms);
    CHECK(rig.outcomes.at({1, 0}) == RxOutcome::Collided);
    CHECK(rig.outcomes.at({1, 2}) == RxOutcome::Collided);
    CHECK(rig.outcomes.at({3, 0}) == RxOutcome::Delivered);
    CHECK_FALSE(rig.outcomes.contains({3, 2}));
}

TEST_CASE("resolveReception on bare intervals")
{
    const Interval rx{kSimStart + 10us, kSimStart + 20us};
    const std::vector<Interval> none;
    CHECK(resolveReception(rx, none) == RxOutcome::Delivered);
    const std::vector<Interval> touching{{kSimStart, kSimStart + 10us}, {kSimStart + 20us, kSimStart + 30us}};
    CHECK(resolveReception(rx, touching) == RxOutcome::Delivered);
    const std::vector<Interval> oneMicro{{kSimStart + 19us, kSimStart + 25us}};
    CHECK(resolveReception(rx, oneMicro) == RxOutcome::Collided);
}

TEST_CASE("carrier sense")
{
    Rig rig({0.0, 1499.0, 1600.0, 5000.0});
    CHECK_FALSE(rig.channel.isBusy(NodeId{1}, kSimStart));
    rig.sendAt(kSimStart, 0, 0);
    bool checked = false;
    rig.scheduler.schedule(kSimStart + 200us, EventKind::TxEnd, [&] {
        const SimTime now = rig.scheduler.now();
        CHECK(rig.channel.isBusy(NodeId{0}, now));
        CHECK(rig.channel.isBusy(NodeId{1}, now));
        CHECK_FALSE(rig.channel.isBusy(NodeId{2}, now));
        CHECK_FALSE(rig.channel.isBusy(NodeId{3}, now));
        // 1499 m is 5 us of propagation.
        CHECK(rig.channel.busyUntil(NodeId{1}, now) == kSimStart + 446us);
        CHECK(rig.channel.firstArrivalBetween(NodeId{1}, kSimStart, now) == kSimStart + 5us);
        checked = true;
    });
    rig.scheduler.runUntil(kSimStart + 1ms);
    CHECK(checked);
    CHECK_FALSE(rig.channel.isBusy(NodeId{1}, kSimStart + 1ms));
}

TEST_CASE("busy meter splits a frame across the window edge")
{
    Rig rig({0.0, 100.0});
    rig.sendAt(kSimStart + 99'800us, 0, 0);
    rig.scheduler.runUntil(kSimStart + 100ms);
    // 441 us frame, 200 us before the edge, the rest after (sub-us propagation).
    CHECK(rig.channel.takeBusyTime(NodeId{1}, kSimStart + 100ms) == 200us);
    rig.scheduler.runUntil(kSimStart + 200ms);
    CHECK(rig.channel.takeBusyTime(NodeId{1}, kSimStart + 200ms) == 241us);
    CHECK(rig.channel.takeBusyTime(NodeId{0}, kSimStart + 200ms) == 441us);
}
