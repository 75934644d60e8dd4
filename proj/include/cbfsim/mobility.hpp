#pragma once

#include "cbfsim/error.hpp"
#include "cbfsim/rng.hpp"
#include "cbfsim/types.hpp"

#include <vector>

namespace cbfsim
{

struct HighwayConfig
{
    int lanesPerDirection = 4;
    double densityPerLane = 30.0; // veh/km
    double roadLength = 6000.0;   // m, ring
    double areaLength = 4000.0;   // m, centred on the road
    double laneWidth = 3.5;       // m
    std::vector<double> speedPerLane{110.0 / 3.6, 100.0 / 3.6, 90.0 / 3.6, 80.0 / 3.6}; // m/s, outer to inner
    double penetrationR2 = 0.0;
    double densityScale = 1.0;

    /// Throws ConfigError naming the first offending field.
    void validate() const;

    DestinationArea destinationArea() const;
};

struct VehicleNode
{
    NodeId id{};
    int lane = -1; // -1 for the roadside source
    Release release = Release::R1;
    bool stationary = false;
};

/// Fleet on a ring road. Vehicles drive at constant speed; positions are a
/// pure function of time.
class Fleet
{
public:
    /// Arbitrary placement, used for hand-built scenarios. Speeds and headings
    /// come from the supplied position vectors.
    Fleet(std::vector<VehicleNode> nodes, std::vector<PositionVector> initial, double roadLength);

    std::size_t size() const noexcept { return m_nodes.size(); }
    const VehicleNode& node(NodeId id) const { return m_nodes.at(index(id)); }
    const std::vector<VehicleNode>& nodes() const noexcept { return m_nodes; }
    const PositionVector& initial(NodeId id) const { return m_initial.at(index(id)); }
    double roadLength() const noexcept { return m_roadLength; }

    NodeId source() const noexcept { return m_source; }

    PositionVector positionAt(NodeId id, SimTime t) const;
    bool inAreaAt(NodeId id, SimTime t, const DestinationArea& area) const
    {
        return area.contains(positionAt(id, t));
    }

    std::size_t countRelease(Release r) const;

private:
    std::vector<VehicleNode> m_nodes;
    std::vector<PositionVector> m_initial;
    double m_roadLength;
    NodeId m_source{};
};

/// Builds the highway fleet: lane vehicles first (ids 0..N-1), the stationary
/// roadside source last. Depends only on (cfg, seed).
Fleet buildFleet(const HighwayConfig& cfg, std::uint64_t seed);

/// Vehicles per lane after density scaling.
std::size_t vehiclesPerLane(const HighwayConfig& cfg);

} // namespace cbfsim
