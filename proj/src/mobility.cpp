#include "cbfsim/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace cbfsim
{

void HighwayConfig::validate() const
{
    auto fail = [](const std::string& field, const std::string& why) {
        throw ConfigError("highway." + field + ": " + why);
    };
    if (lanesPerDirection < 1)
    {
        fail("lanes_per_direction", "must be at least 1");
    }
    if (!(densityPerLane > 0.0))
    {
        fail("density_per_lane", "must be positive");
    }
    if (!(roadLength > 0.0))
    {
        fail("road_length", "must be positive");
    }
    if (!(areaLength > 0.0) || areaLength > roadLength)
    {
        fail("area_length", "must be positive and no longer than the road");
    }
    if (!(laneWidth > 0.0))
    {
        fail("lane_width", "must be positive");
    }
    if (speedPerLane.size() != static_cast<std::size_t>(lanesPerDirection))
    {
        fail("speeds_kmh", "needs one entry per lane (" + std::to_string(lanesPerDirection) + ")");
    }
    if (std::any_of(speedPerLane.begin(), speedPerLane.end(), [](double s) { return !(s >= 0.0); }))
    {
        fail("speeds_kmh", "speeds must be non-negative");
    }
    if (!(penetrationR2 >= 0.0 && penetrationR2 <= 1.0))
    {
        fail("penetration", "must lie in [0, 1]");
    }
    if (!(densityScale > 0.0))
    {
        fail("density_scale", "must be positive");
    }
    if (vehiclesPerLane(*this) == 0)
    {
        fail("density_per_lane", "configuration yields zero vehicles");
    }
}

DestinationArea HighwayConfig::destinationArea() const
{
    DestinationArea area;
    area.centerX = roadLength / 2.0;
    area.centerY = 0.0;
    area.halfLength = areaLength / 2.0;
    // All lanes plus the shoulder the source stands on.
    area.halfWidth = (lanesPerDirection + 1) * laneWidth;
    return area;
}

std::size_t vehiclesPerLane(const HighwayConfig& cfg)
{
    const double count = cfg.densityPerLane * (cfg.roadLength / 1000.0) * cfg.densityScale;
    return static_cast<std::size_t>(std::llround(std::max(0.0, count)));
}

Fleet::Fleet(std::vector<VehicleNode> nodes, std::vector<PositionVector> initial, double roadLength)
    : m_nodes(std::move(nodes)), m_initial(std::move(initial)), m_roadLength(roadLength)
{
    if (m_nodes.empty())
    {
        throw ConfigError("fleet: no vehicles");
    }
    if (m_nodes.size() != m_initial.size())
    {
        throw ConfigError("fleet: node and position counts differ");
    }
    std::size_t sources = 0;
    for (std::size_t i = 0; i < m_nodes.size(); ++i)
    {
        if (index(m_nodes[i].id) != i)
        {
            throw ConfigError("fleet: node ids must be dense and ordered");
        }
        if (m_nodes[i].stationary)
        {
            ++sources;
            m_source = m_nodes[i].id;
            m_initial[i].speed = 0.0;
        }
    }
    if (sources != 1)
    {
        throw ConfigError("fleet: exactly one stationary source is required");
    }
}

PositionVector Fleet::positionAt(NodeId id, SimTime t) const
{
    PositionVector pv = m_initial[index(id)];
    pv.at = t;
    if (pv.speed == 0.0)
    {
        return pv;
    }
    const double travelled = pv.heading * pv.speed * toSeconds(t);
    double x = std::fmod(pv.x + travelled, m_roadLength);
    if (x < 0.0)
    {
        x += m_roadLength;
    }
    pv.x = x;
    return pv;
}

std::size_t Fleet::countRelease(Release r) const
{
    return static_cast<std::size_t>(
        std::count_if(m_nodes.begin(), m_nodes.end(), [r](const VehicleNode& n) { return n.release == r; }));
}

Fleet buildFleet(const HighwayConfig& cfg, std::uint64_t seed)
{
    cfg.validate();

    RngStream placement(seed, streams::kPlacement);
    RngStream assignment(seed, streams::kFleetAssignment);

    const std::size_t perLane = vehiclesPerLane(cfg);
    const int lanes = 2 * cfg.lanesPerDirection;
    const double spacing = cfg.roadLength / static_cast<double>(perLane);

    std::vector<VehicleNode> nodes;
    std::vector<PositionVector> initial;
    nodes.reserve(perLane * lanes + 1);
    initial.reserve(perLane * lanes + 1);

    for (int lane = 0; lane < lanes; ++lane)
    {
        const int heading = lane < cfg.lanesPerDirection ? 1 : -1;
        const int laneInDirection = lane % cfg.lanesPerDirection; // 0 is the outer lane
        const double y = heading * (cfg.lanesPerDirection - laneInDirection - 0.5) * cfg.laneWidth;
        const double speed = cfg.speedPerLane[laneInDirection];
        for (std::size_t slot = 0; slot < perLane; ++slot)
        {
            // One vehicle per equal-length cell, uniformly placed inside it.
            const double x = (static_cast<double>(slot) + placement.uniform01()) * spacing;
            nodes.push_back(VehicleNode{NodeId{static_cast<std::uint32_t>(nodes.size())}, lane, Release::R1, false});
            initial.push_back(PositionVector{x, y, speed, heading, kSimStart});
        }
    }

    const std::size_t vehicles = nodes.size();
    const auto r2Count = static_cast<std::size_t>(std::llround(static_cast<double>(vehicles) * cfg.penetrationR2));
    std::vector<std::uint32_t> order(vehicles);
    std::iota(order.begin(), order.end(), 0u);
    assignment.shuffle(std::span<std::uint32_t>(order));
    for (std::size_t i = 0; i < r2Count; ++i)
    {
        nodes[order[i]].release = Release::R2;
    }

    const DestinationArea area = cfg.destinationArea();
    VehicleNode source{NodeId{static_cast<std::uint32_t>(vehicles)}, -1, Release::R1, true};
    // The source never forwards its own packets, so its release has no effect
    // on dissemination; it follows the fleet majority for trace readability.
    source.release = cfg.penetrationR2 > 0.5 ? Release::R2 : Release::R1;
    nodes.push_back(source);
    initial.push_back(PositionVector{area.centerX, (cfg.lanesPerDirection + 0.5) * cfg.laneWidth, 0.0, 1, kSimStart});

    return Fleet(std::move(nodes), std::move(initial), cfg.roadLength);
}

} // namespace cbfsim
