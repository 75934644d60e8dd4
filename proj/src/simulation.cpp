#include "cbfsim/simulation.hpp"

namespace cbfsim
{

void SimulationConfig::validate() const
{
    channel.validate();
    access.validate();
    cbf.validate(channel.maxRange);
    cam.validate();
    denm.validate();
    if (end < denmStart)
    {
        throw ConfigError("experiment: run ends before the first DENM");
    }
}

Simulation::Simulation(SimulationConfig cfg, Fleet fleet, std::uint64_t seed)
    : m_cfg(std::move(cfg)), m_fleet(std::move(fleet)), m_seed(seed), m_backoff(seed, streams::kBackoff),
      m_camPhase(seed, "cam-phase")
{
    m_cfg.validate();
    m_channel = std::make_unique<Channel>(m_cfg.channel, m_fleet, m_scheduler);
    m_channel->setReceiveHandler(
        [this](NodeId rx, const Frame& frame, RxOutcome outcome) { onChannelReceive(rx, frame, outcome); });

    std::vector<GeoNetRouter*> routers;
    std::vector<AccessLayer*> access;
    for (const auto& node : m_fleet.nodes())
    {
        m_access.push_back(
            std::make_unique<AccessLayer>(node.id, m_cfg.access, m_scheduler, *m_channel, m_fleet, m_backoff, m_bus));
        m_routers.push_back(std::make_unique<GeoNetRouter>(node.id, node.release, m_cfg.cbf, m_scheduler,
                                                           *m_access.back(), m_fleet, m_bus));
        routers.push_back(m_routers.back().get());
        access.push_back(m_access.back().get());
    }
    m_facilities = std::make_unique<Facilities>(m_cfg.cam, m_cfg.denm, m_scheduler, m_fleet, std::move(routers),
                                                std::move(access));
    for (auto& router : m_routers)
    {
        router->setDeliveryHandler([this](NodeId self, const GbcPacket& pkt, SimTime now) {
            m_facilities->onDeliver(self, pkt.id(), now);
        });
    }
}

void Simulation::onChannelReceive(NodeId rx, const Frame& frame, RxOutcome outcome)
{
    const auto msg = messageOf(frame.payload);
    if (msg)
    {
        const PositionVector pv = m_fleet.positionAt(rx, m_scheduler.now());
        m_bus.record(TraceRecord{m_scheduler.now(), rx,
                                 outcome == RxOutcome::Delivered ? TraceKind::RxDelivered : TraceKind::RxCollided, msg,
                                 pv.x, pv.y});
    }
    if (outcome == RxOutcome::Delivered)
    {
        m_routers[index(rx)]->onReceive(frame);
    }
}

void Simulation::cbrWindow()
{
    const SimTime now = m_scheduler.now();
    for (auto& access : m_access)
    {
        access->onCbrWindowEnd(now);
    }
    m_scheduler.scheduleIn(m_cfg.access.dcc.cbrWindow, EventKind::CbrWindowEnd, [this] { cbrWindow(); });
}

void Simulation::start()
{
    if (m_started)
    {
        return;
    }
    m_started = true;
    m_scheduler.scheduleIn(m_cfg.access.dcc.cbrWindow, EventKind::CbrWindowEnd, [this] { cbrWindow(); });
    m_facilities->startCams(m_camPhase);
    m_scheduler.schedule(m_cfg.denmStart, EventKind::MeasurementStart, [this] {
        m_facilities->scheduleDenms(m_scheduler.now(), m_cfg.denmCount, m_cfg.area);
    });
    const SimTime measurementEnd = m_cfg.denmStart + m_cfg.denm.period * m_cfg.denmCount;
    if (measurementEnd <= m_cfg.end)
    {
        m_scheduler.schedule(measurementEnd, EventKind::MeasurementEnd, [] {});
    }
}

void Simulation::run()
{
    start();
    m_scheduler.runUntil(m_cfg.end);
}

} // namespace cbfsim
