#pragma once

#include "cbfsim/geonet.hpp"

#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace cbfsim
{

struct CamConfig
{
    bool enabled = true;
    Duration checkPeriod{100'000};
    Duration minInterval{100'000};
    Duration maxInterval{1'000'000};
    double distanceThreshold = 4.0; // m
    double speedThreshold = 0.5;    // m/s
    double headingThreshold = 4.0;  // degrees
    std::uint32_t bytes = 285;

    void validate() const;
};

struct DenmConfig
{
    Duration period{1'000'000};
    Duration lifetime{10'000'000};
    std::uint32_t bytes = 301;

    void validate() const;
};

struct CamState
{
    std::optional<SimTime> lastCamAt;
    PositionVector lastCamPv;
    double travelledAtLastCam = 0.0; // odometer, immune to ring wrap
};

enum class CamDecision : std::uint8_t
{
    Generate,
    Skip,
};

/// CAM generation rule: 1 s floor, movement triggers no faster than the
/// minimum interval, and only while the DCC gate is open.
CamDecision camTriggerCheck(const CamState& state, const PositionVector& current, double travelled, SimTime now,
                            SimTime nextPermittedTx, const CamConfig& cfg);

struct GeneratedMessage
{
    MessageId id;
    SimTime generatedAt;
    SimTime validUntil;
};

/// Receives facilities-level events; implemented by the metrics pipeline.
class FacilitiesListener
{
public:
    virtual ~FacilitiesListener() = default;
    virtual void onMessageGenerated(const GeneratedMessage& msg) = 0;
    virtual void onFirstDelivery(NodeId node, MessageId msg, SimTime at) = 0;
};

/// CA service on every vehicle and DEN service on the source, plus the
/// per-node reception bookkeeping used for PDR.
class Facilities
{
public:
    Facilities(const CamConfig& cam, const DenmConfig& denm, Scheduler& scheduler, const Fleet& fleet,
               std::vector<GeoNetRouter*> routers, std::vector<AccessLayer*> access);

    void setListener(FacilitiesListener* listener) { m_listener = listener; }

    /// Starts periodic CAM checks; each node gets its own phase offset.
    void startCams(RngStream& phase);

    /// Schedules `count` DENMs every period starting at `first`.
    void scheduleDenms(SimTime first, int count, const DestinationArea& area);

    /// True iff this is the first in-lifetime reception of msg at node.
    bool onDeliver(NodeId node, MessageId msg, SimTime now);

    const std::vector<GeneratedMessage>& generated() const noexcept { return m_generated; }
    const CamState& camState(NodeId node) const { return m_cam.at(index(node)); }
    std::uint64_t camsGenerated() const noexcept { return m_camsGenerated; }

private:
    void camCheck(NodeId node);
    void denmTick(int remaining, DestinationArea area);

    const CamConfig& m_camCfg;
    const DenmConfig& m_denmCfg;
    Scheduler& m_scheduler;
    const Fleet& m_fleet;
    std::vector<GeoNetRouter*> m_routers;
    std::vector<AccessLayer*> m_access;
    FacilitiesListener* m_listener = nullptr;

    std::vector<CamState> m_cam;
    std::uint64_t m_camsGenerated = 0;
    std::vector<GeneratedMessage> m_generated;
    std::unordered_map<MessageId, SimTime> m_validUntil;
    std::unordered_set<std::uint64_t> m_received; // (node, message) keys
};

} // namespace cbfsim
