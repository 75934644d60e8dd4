#include "cbfsim/facilities.hpp"

#include <cmath>

namespace cbfsim
{

void CamConfig::validate() const
{
    if (checkPeriod <= Duration{0})
    {
        throw ConfigError("cam.check_period_ms: must be positive");
    }
    if (!(minInterval > Duration{0} && minInterval <= maxInterval))
    {
        throw ConfigError("cam.min_interval_ms/max_interval_ms: need 0 < min <= max");
    }
    if (bytes == 0)
    {
        throw ConfigError("cam.bytes: must be positive");
    }
}

void DenmConfig::validate() const
{
    if (period <= Duration{0})
    {
        throw ConfigError("denm.period_ms: must be positive");
    }
    if (lifetime <= Duration{0})
    {
        throw ConfigError("denm.lifetime_ms: must be positive");
    }
    if (bytes == 0)
    {
        throw ConfigError("denm.bytes: must be positive");
    }
}

CamDecision camTriggerCheck(const CamState& state, const PositionVector& current, double travelled, SimTime now,
                            SimTime nextPermittedTx, const CamConfig& cfg)
{
    if (nextPermittedTx > now)
    {
        return CamDecision::Skip;
    }
    if (!state.lastCamAt)
    {
        return CamDecision::Generate;
    }
    const Duration elapsed = now - *state.lastCamAt;
    if (elapsed >= cfg.maxInterval)
    {
        return CamDecision::Generate;
    }
    if (elapsed < cfg.minInterval)
    {
        return CamDecision::Skip;
    }
    const double moved = travelled - state.travelledAtLastCam;
    const double headingChange = current.heading == state.lastCamPv.heading ? 0.0 : 180.0;
    const bool dynamics = moved >= cfg.distanceThreshold ||
                          std::abs(current.speed - state.lastCamPv.speed) >= cfg.speedThreshold ||
                          headingChange >= cfg.headingThreshold;
    return dynamics ? CamDecision::Generate : CamDecision::Skip;
}

Facilities::Facilities(const CamConfig& cam, const DenmConfig& denm, Scheduler& scheduler, const Fleet& fleet,
                       std::vector<GeoNetRouter*> routers, std::vector<AccessLayer*> access)
    : m_camCfg(cam), m_denmCfg(denm), m_scheduler(scheduler), m_fleet(fleet), m_routers(std::move(routers)),
      m_access(std::move(access)), m_cam(fleet.size())
{
}

void Facilities::startCams(RngStream& phase)
{
    if (!m_camCfg.enabled)
    {
        return;
    }
    const auto period = static_cast<std::uint64_t>(m_camCfg.checkPeriod.count());
    for (const auto& node : m_fleet.nodes())
    {
        const Duration offset{static_cast<Duration::rep>(phase.uniformInt(0, period - 1))};
        const NodeId id = node.id;
        m_scheduler.schedule(m_scheduler.now() + offset, EventKind::CamTrigger, [this, id] { camCheck(id); });
    }
}

void Facilities::camCheck(NodeId node)
{
    const SimTime now = m_scheduler.now();
    const PositionVector pv = m_fleet.positionAt(node, now);
    const double travelled = pv.speed * toSeconds(now);
    CamState& state = m_cam[index(node)];
    const SimTime permitted = m_access[index(node)]->nextPermittedTx(now);
    if (camTriggerCheck(state, pv, travelled, now, permitted, m_camCfg) == CamDecision::Generate)
    {
        state.lastCamAt = now;
        state.lastCamPv = pv;
        state.travelledAtLastCam = travelled;
        ++m_camsGenerated;
        m_routers[index(node)]->sendShb(m_camCfg.bytes);
    }
    m_scheduler.scheduleIn(m_camCfg.checkPeriod, EventKind::CamTrigger, [this, node] { camCheck(node); });
}

void Facilities::scheduleDenms(SimTime first, int count, const DestinationArea& area)
{
    if (count <= 0)
    {
        return;
    }
    m_scheduler.schedule(first, EventKind::DenmTrigger, [this, count, area] { denmTick(count, area); });
}

void Facilities::denmTick(int remaining, DestinationArea area)
{
    const SimTime now = m_scheduler.now();
    const NodeId source = m_fleet.source();
    const OriginateResult result = m_routers[index(source)]->originateGbc(m_denmCfg.bytes, area);
    if (result.status != OriginateStatus::SourceOutsideArea)
    {
        const GeneratedMessage msg{result.id, now, now + m_denmCfg.lifetime};
        m_generated.push_back(msg);
        m_validUntil.emplace(msg.id, msg.validUntil);
        if (m_listener)
        {
            m_listener->onMessageGenerated(msg);
        }
    }
    if (remaining > 1)
    {
        m_scheduler.scheduleIn(m_denmCfg.period, EventKind::DenmTrigger,
                               [this, remaining, area] { denmTick(remaining - 1, area); });
    }
}

bool Facilities::onDeliver(NodeId node, MessageId msg, SimTime now)
{
    const auto valid = m_validUntil.find(msg);
    if (valid == m_validUntil.end() || now > valid->second)
    {
        return false;
    }
    const std::uint64_t key = (static_cast<std::uint64_t>(index(node)) << 32) |
                              (static_cast<std::uint64_t>(index(msg.source)) << 16) | msg.sn;
    if (!m_received.insert(key).second)
    {
        return false;
    }
    if (m_listener)
    {
        m_listener->onFirstDelivery(node, msg, now);
    }
    return true;
}

} // namespace cbfsim
