#pragma once

#include "cbfsim/access.hpp"
#include "cbfsim/channel.hpp"
#include "cbfsim/facilities.hpp"
#include "cbfsim/geonet.hpp"
#include "cbfsim/mobility.hpp"
#include "cbfsim/rng.hpp"
#include "cbfsim/scheduler.hpp"
#include "cbfsim/trace.hpp"

#include <memory>
#include <vector>

namespace cbfsim
{

/// Everything one run needs besides the fleet.
struct SimulationConfig
{
    ChannelConfig channel;
    AccessConfig access;
    CbfParams cbf;
    CamConfig cam;
    DenmConfig denm;
    DestinationArea area;
    SimTime denmStart{std::chrono::seconds{120}};
    int denmCount = 30;
    SimTime end{std::chrono::seconds{160}};

    void validate() const;
};

/// One run: owns the engine, the medium and the per-node protocol stacks.
class Simulation
{
public:
    Simulation(SimulationConfig cfg, Fleet fleet, std::uint64_t seed);

    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    /// Sinks must outlive the run.
    void attachTrace(TraceSink& sink) { m_bus.attach(sink); }
    void setListener(FacilitiesListener* listener) { m_facilities->setListener(listener); }

    /// Schedules CAMs, DENMs and CBR windows, then runs to cfg.end.
    void run();

    /// Schedules the periodic machinery without running; for tests that
    /// drive the clock themselves.
    void start();

    const SimulationConfig& config() const noexcept { return m_cfg; }
    Scheduler& scheduler() noexcept { return m_scheduler; }
    const Fleet& fleet() const noexcept { return m_fleet; }
    Channel& channel() noexcept { return *m_channel; }
    AccessLayer& access(NodeId id) { return *m_access.at(index(id)); }
    GeoNetRouter& router(NodeId id) { return *m_routers.at(index(id)); }
    Facilities& facilities() noexcept { return *m_facilities; }

private:
    void onChannelReceive(NodeId rx, const Frame& frame, RxOutcome outcome);
    void cbrWindow();

    SimulationConfig m_cfg;
    Fleet m_fleet;
    std::uint64_t m_seed;
    Scheduler m_scheduler;
    TraceBus m_bus;
    RngStream m_backoff;
    RngStream m_camPhase;
    std::unique_ptr<Channel> m_channel;
    std::vector<std::unique_ptr<AccessLayer>> m_access;
    std::vector<std::unique_ptr<GeoNetRouter>> m_routers;
    std::unique_ptr<Facilities> m_facilities;
    bool m_started = false;
};

} // namespace cbfsim
