#pragma once

#include "cbfsim/mobility.hpp"
#include "cbfsim/simulation.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace cbfsim
{

/// Full experiment description. Defaults reproduce the highway coexistence
/// scenario: 4+4 lanes at 30 veh/km, 4 km area, 120 s warm-up, 30 s of
/// 1 Hz DENMs, penetration sweep 0..100 %.
struct ScenarioConfig
{
    HighwayConfig highway;
    ChannelConfig channel;
    AccessConfig access;
    CbfParams cbf;
    CamConfig cam;
    DenmConfig denm;
    double warmupSeconds = 120.0;
    double measureSeconds = 30.0;
    double binWidth = 100.0;
    std::vector<std::uint64_t> seeds{1, 2, 3};
    std::vector<double> penetrations{0.0, 0.25, 0.5, 0.75, 1.0};
    std::filesystem::path outputDir = "cbfsim-out";
    unsigned jobs = 0; // 0: one per hardware thread

    void validate() const;

    /// Number of DENMs generated in the measurement window.
    int messageCount() const;

    /// Per-run engine configuration for one penetration rate.
    SimulationConfig simulationConfig() const;
};

/// Parses an INI-style scenario file ("[section]" headers, "key = value"
/// lines, '#' or ';' comments). Missing keys keep their defaults; unknown
/// keys and bad values raise ConfigError naming the field.
ScenarioConfig loadScenario(const std::filesystem::path& path);
ScenarioConfig parseScenario(const std::string& text);

/// Every recognised key, "section.key", for documentation and tests.
std::vector<std::string> scenarioKeys();

} // namespace cbfsim
