#pragma once

#include "cbfsim/channel.hpp"
#include "cbfsim/dcc.hpp"
#include "cbfsim/rng.hpp"
#include "cbfsim/trace.hpp"

#include <array>
#include <deque>
#include <optional>

namespace cbfsim
{

struct EdcaParams
{
    int aifsSlots = 2;
    int cwMin = 3;
};

struct AccessConfig
{
    std::array<std::size_t, kTrafficClassCount> queueCapacity{4, 4, 4, 4};
    std::array<EdcaParams, kTrafficClassCount> edca{{{2, 3}, {2, 7}, {3, 15}, {7, 15}}};
    Duration slot{13};
    DccParams dcc;

    void validate() const;
};

enum class EnqueueResult : std::uint8_t
{
    Accepted,
    DroppedQueueFull,
};

/// Per-node access layer: one bounded FIFO per traffic class behind a DCC
/// gate, and CSMA with AIFS plus random backoff in front of the medium.
class AccessLayer
{
public:
    AccessLayer(NodeId self, const AccessConfig& cfg, Scheduler& scheduler, Channel& channel, const Fleet& fleet,
                RngStream& backoff, TraceSink& trace);

    AccessLayer(const AccessLayer&) = delete;
    AccessLayer& operator=(const AccessLayer&) = delete;

    EnqueueResult enqueue(GnPdu pdu, TrafficClass tc);

    /// max(now, gate_next): the earliest time DCC lets a frame out.
    SimTime nextPermittedTx(SimTime now) const { return cbfsim::nextPermittedTx(m_dcc, now); }

    /// Closes the current CBR window: updates the smoothed CBR and the duty.
    void onCbrWindowEnd(SimTime windowEnd);

    const DccState& dcc() const noexcept { return m_dcc; }
    std::size_t queued(TrafficClass tc) const { return m_queues[static_cast<std::size_t>(tc)].size(); }
    bool busy() const noexcept { return m_inflight.has_value(); }
    std::uint64_t transmissions() const noexcept { return m_transmissions; }
    std::uint64_t drops() const noexcept { return m_drops; }

private:
    struct Pending
    {
        GnPdu pdu;
        TrafficClass tc;
        std::uint64_t slotsLeft;
    };

    void tryDequeue();
    void armGate();
    void contend();
    void attempt();
    void startTransmission();
    void finishTransmission();
    void trace(TraceKind kind, const std::optional<MessageId>& msg);

    const EdcaParams& edca(TrafficClass tc) const { return m_cfg.edca[static_cast<std::size_t>(tc)]; }

    NodeId m_self;
    const AccessConfig& m_cfg;
    Scheduler& m_scheduler;
    Channel& m_channel;
    const Fleet& m_fleet;
    RngStream& m_backoff;
    TraceSink& m_trace;

    std::array<std::deque<GnPdu>, kTrafficClassCount> m_queues;
    DccState m_dcc;
    std::optional<Pending> m_inflight;
    SimTime m_countdownFrom = kSimStart;
    EventHandle m_gateEvent;

    std::uint64_t m_transmissions = 0;
    std::uint64_t m_drops = 0;
};

} // namespace cbfsim
