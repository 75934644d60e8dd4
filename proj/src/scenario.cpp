#include "cbfsim/scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace cbfsim
{

namespace
{

using Setter = std::function<void(ScenarioConfig&, const std::string& key, const std::string& value)>;

std::string trim(const std::string& s)
{
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos)
    {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parseNumber(const std::string& key, const std::string& raw)
{
    const std::string value = trim(raw);
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size() || !std::isfinite(v))
    {
        throw ConfigError(key + ": expected a number, got '" + raw + "'");
    }
    return v;
}

long long parseInteger(const std::string& key, const std::string& raw)
{
    const double v = parseNumber(key, raw);
    if (v != std::floor(v))
    {
        throw ConfigError(key + ": expected an integer, got '" + raw + "'");
    }
    return static_cast<long long>(v);
}

std::size_t parseCount(const std::string& key, const std::string& raw)
{
    const long long v = parseInteger(key, raw);
    if (v < 0)
    {
        throw ConfigError(key + ": must be non-negative");
    }
    return static_cast<std::size_t>(v);
}

bool parseBool(const std::string& key, const std::string& raw)
{
    const std::string v = trim(raw);
    if (v == "true" || v == "1" || v == "yes" || v == "on")
    {
        return true;
    }
    if (v == "false" || v == "0" || v == "no" || v == "off")
    {
        return false;
    }
    throw ConfigError(key + ": expected true/false, got '" + raw + "'");
}

std::vector<double> parseList(const std::string& key, const std::string& raw)
{
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        out.push_back(parseNumber(key, item));
    }
    if (out.empty())
    {
        throw ConfigError(key + ": expected a comma-separated list");
    }
    return out;
}

Duration millis(const std::string& key, const std::string& raw)
{
    return Duration{std::llround(parseNumber(key, raw) * 1000.0)};
}

Duration micros(const std::string& key, const std::string& raw)
{
    return Duration{parseInteger(key, raw)};
}

// Values never contain '#' or ';', so a comment runs from either to end of line.
std::string stripComments(const std::string& text)
{
    std::istringstream in(text);
    std::string out;
    std::string line;
    while (std::getline(in, line))
    {
        out += line.substr(0, line.find_first_of("#;"));
        out += '\n';
    }
    return out;
}

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        // highway
        t["highway.lanes_per_direction"] = [](auto& c, auto& k, auto& v) {
            c.highway.lanesPerDirection = static_cast<int>(parseInteger(k, v));
        };
        t["highway.density_per_lane"] = [](auto& c, auto& k, auto& v) { c.highway.densityPerLane = parseNumber(k, v); };
        t["highway.road_length"] = [](auto& c, auto& k, auto& v) { c.highway.roadLength = parseNumber(k, v); };
        t["highway.area_length"] = [](auto& c, auto& k, auto& v) { c.highway.areaLength = parseNumber(k, v); };
        t["highway.lane_width"] = [](auto& c, auto& k, auto& v) { c.highway.laneWidth = parseNumber(k, v); };
        t["highway.speeds_kmh"] = [](auto& c, auto& k, auto& v) {
            c.highway.speedPerLane.clear();
            for (const double kmh : parseList(k, v))
            {
                c.highway.speedPerLane.push_back(kmh / 3.6);
            }
        };
        t["highway.density_scale"] = [](auto& c, auto& k, auto& v) { c.highway.densityScale = parseNumber(k, v); };
        // channel
        t["channel.max_range"] = [](auto& c, auto& k, auto& v) { c.channel.maxRange = parseNumber(k, v); };
        t["channel.data_rate"] = [](auto& c, auto& k, auto& v) { c.channel.dataRate = parseNumber(k, v); };
        t["channel.preamble_us"] = [](auto& c, auto& k, auto& v) { c.channel.preambleOverhead = micros(k, v); };
        t["channel.propagation_speed"] = [](auto& c, auto& k, auto& v) {
            c.channel.propagationSpeed = parseNumber(k, v);
        };
        t["channel.resolve_shb"] = [](auto& c, auto& k, auto& v) {
            c.channel.resolveShbReceptions = parseBool(k, v);
        };
        // access
        t["access.slot_us"] = [](auto& c, auto& k, auto& v) { c.access.slot = micros(k, v); };
        for (std::size_t tc = 0; tc < kTrafficClassCount; ++tc)
        {
            const std::string prefix = "access.tc" + std::to_string(tc) + "_";
            t[prefix + "queue_capacity"] = [tc](auto& c, auto& k, auto& v) {
                c.access.queueCapacity[tc] = parseCount(k, v);
            };
            t[prefix + "aifs"] = [tc](auto& c, auto& k, auto& v) {
                c.access.edca[tc].aifsSlots = static_cast<int>(parseInteger(k, v));
            };
            t[prefix + "cw_min"] = [tc](auto& c, auto& k, auto& v) {
                c.access.edca[tc].cwMin = static_cast<int>(parseInteger(k, v));
            };
        }
        // dcc
        t["dcc.min_duty"] = [](auto& c, auto& k, auto& v) { c.access.dcc.minDuty = parseNumber(k, v); };
        t["dcc.max_duty"] = [](auto& c, auto& k, auto& v) { c.access.dcc.maxDuty = parseNumber(k, v); };
        t["dcc.initial_duty"] = [](auto& c, auto& k, auto& v) { c.access.dcc.initialDuty = parseNumber(k, v); };
        t["dcc.target_cbr"] = [](auto& c, auto& k, auto& v) { c.access.dcc.targetCbr = parseNumber(k, v); };
        t["dcc.additive_step"] = [](auto& c, auto& k, auto& v) { c.access.dcc.additiveStep = parseNumber(k, v); };
        t["dcc.decrease_factor"] = [](auto& c, auto& k, auto& v) { c.access.dcc.decreaseFactor = parseNumber(k, v); };
        t["dcc.cbr_smoothing"] = [](auto& c, auto& k, auto& v) { c.access.dcc.cbrSmoothing = parseNumber(k, v); };
        t["dcc.cbr_window_ms"] = [](auto& c, auto& k, auto& v) { c.access.dcc.cbrWindow = millis(k, v); };
        t["dcc.min_gate_ms"] = [](auto& c, auto& k, auto& v) { c.access.dcc.minGate = millis(k, v); };
        t["dcc.max_gate_ms"] = [](auto& c, auto& k, auto& v) { c.access.dcc.maxGate = millis(k, v); };
        // cbf
        t["cbf.to_max_ms"] = [](auto& c, auto& k, auto& v) { c.cbf.toMax = millis(k, v); };
        t["cbf.to_min_ms"] = [](auto& c, auto& k, auto& v) { c.cbf.toMin = millis(k, v); };
        t["cbf.dist_max"] = [](auto& c, auto& k, auto& v) { c.cbf.distMax = parseNumber(k, v); };
        // cam
        t["cam.enabled"] = [](auto& c, auto& k, auto& v) { c.cam.enabled = parseBool(k, v); };
        t["cam.check_period_ms"] = [](auto& c, auto& k, auto& v) { c.cam.checkPeriod = millis(k, v); };
        t["cam.min_interval_ms"] = [](auto& c, auto& k, auto& v) { c.cam.minInterval = millis(k, v); };
        t["cam.max_interval_ms"] = [](auto& c, auto& k, auto& v) { c.cam.maxInterval = millis(k, v); };
        t["cam.distance_threshold"] = [](auto& c, auto& k, auto& v) { c.cam.distanceThreshold = parseNumber(k, v); };
        t["cam.speed_threshold"] = [](auto& c, auto& k, auto& v) { c.cam.speedThreshold = parseNumber(k, v); };
        t["cam.heading_threshold"] = [](auto& c, auto& k, auto& v) { c.cam.headingThreshold = parseNumber(k, v); };
        t["cam.bytes"] = [](auto& c, auto& k, auto& v) {
            c.cam.bytes = static_cast<std::uint32_t>(parseCount(k, v));
        };
        // denm
        t["denm.period_ms"] = [](auto& c, auto& k, auto& v) { c.denm.period = millis(k, v); };
        t["denm.lifetime_ms"] = [](auto& c, auto& k, auto& v) { c.denm.lifetime = millis(k, v); };
        t["denm.bytes"] = [](auto& c, auto& k, auto& v) {
            c.denm.bytes = static_cast<std::uint32_t>(parseCount(k, v));
        };
        // experiment
        t["experiment.warmup_s"] = [](auto& c, auto& k, auto& v) { c.warmupSeconds = parseNumber(k, v); };
        t["experiment.measure_s"] = [](auto& c, auto& k, auto& v) { c.measureSeconds = parseNumber(k, v); };
        t["experiment.bin_width"] = [](auto& c, auto& k, auto& v) { c.binWidth = parseNumber(k, v); };
        t["experiment.seeds"] = [](auto& c, auto& k, auto& v) {
            c.seeds.clear();
            for (const double s : parseList(k, v))
            {
                if (s < 0 || s != std::floor(s))
                {
                    throw ConfigError(k + ": seeds must be non-negative integers");
                }
                c.seeds.push_back(static_cast<std::uint64_t>(s));
            }
        };
        t["experiment.penetration"] = [](auto& c, auto& k, auto& v) { c.penetrations = parseList(k, v); };
        t["experiment.output_dir"] = [](auto& c, auto&, auto& v) { c.outputDir = trim(v); };
        t["experiment.jobs"] = [](auto& c, auto& k, auto& v) { c.jobs = static_cast<unsigned>(parseCount(k, v)); };
        return t;
    }();
    return table;
}

} // namespace

void ScenarioConfig::validate() const
{
    highway.validate();
    if (!(warmupSeconds >= 0.0))
    {
        throw ConfigError("experiment.warmup_s: must be non-negative");
    }
    if (!(measureSeconds > 0.0))
    {
        throw ConfigError("experiment.measure_s: must be positive");
    }
    if (!(binWidth > 0.0))
    {
        throw ConfigError("experiment.bin_width: must be positive");
    }
    if (seeds.empty())
    {
        throw ConfigError("experiment.seeds: need at least one seed");
    }
    if (penetrations.empty())
    {
        throw ConfigError("experiment.penetration: need at least one value");
    }
    for (const double p : penetrations)
    {
        if (!(p >= 0.0 && p <= 1.0))
        {
            throw ConfigError("experiment.penetration: " + std::to_string(p) + " is outside [0, 1]");
        }
    }
    simulationConfig().validate();
}

int ScenarioConfig::messageCount() const
{
    const double periodSeconds = toSeconds(denm.period);
    return static_cast<int>(std::floor(measureSeconds / periodSeconds + 1e-9));
}

SimulationConfig ScenarioConfig::simulationConfig() const
{
    SimulationConfig sim;
    sim.channel = channel;
    sim.access = access;
    sim.cbf = cbf;
    sim.cam = cam;
    sim.denm = denm;
    sim.area = highway.destinationArea();
    sim.denmStart = SimTime{Duration{std::llround(warmupSeconds * 1e6)}};
    sim.denmCount = messageCount();
    // Run until the last message's lifetime has expired.
    sim.end = sim.denmStart + Duration{std::llround(measureSeconds * 1e6)} + denm.lifetime;
    return sim;
}

ScenarioConfig parseScenario(const std::string& text)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in(stripComments(text));
    try
    {
        pt::read_ini(in, tree);
    }
    catch (const pt::ini_parser_error& e)
    {
        throw ConfigError("scenario: " + std::string(e.what()));
    }

    ScenarioConfig cfg;
    const auto& table = setters();
    for (const auto& [section, body] : tree)
    {
        if (body.empty() && !body.data().empty())
        {
            throw ConfigError(section + ": key outside of any section");
        }
        for (const auto& [key, value] : body)
        {
            const std::string full = section + "." + key;
            const auto it = table.find(full);
            if (it == table.end())
            {
                throw ConfigError(full + ": unknown key");
            }
            it->second(cfg, full, value.data());
        }
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig loadScenario(const std::filesystem::path& path)
{
    std::ifstream file(path);
    if (!file)
    {
        throw ConfigError("scenario: cannot open " + path.string());
    }
    std::stringstream buffer;
    buffer << file.rdbuf();
    ScenarioConfig cfg = parseScenario(buffer.str());
    std::filesystem::create_directories(cfg.outputDir);
    return cfg;
}

std::vector<std::string> scenarioKeys()
{
    std::vector<std::string> keys;
    for (const auto& [key, setter] : setters())
    {
        keys.push_back(key);
    }
    return keys;
}

} // namespace cbfsim
