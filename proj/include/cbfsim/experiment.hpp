#pragma once

#include "cbfsim/metrics.hpp"
#include "cbfsim/scenario.hpp"

#include <filesystem>
#include <functional>
#include <vector>

namespace cbfsim
{

struct RunResult
{
    double penetration = 0.0;
    std::uint64_t seed = 0;
    std::vector<MessageReport> reports;
    std::uint64_t framesSent = 0;
    std::uint64_t eventsProcessed = 0;
    double wallSeconds = 0.0;
};

/// Lets callers attach extra trace sinks to a run before it starts.
using RunHook = std::function<void(Simulation&)>;

/// One (penetration, seed) run of the scenario.
RunResult runOnce(const ScenarioConfig& cfg, double penetration, std::uint64_t seed, const RunHook& hook = {});

/// Every (penetration, seed) pair, ordered by penetration then seed. Runs
/// execute on `cfg.jobs` threads; results do not depend on the thread count.
/// A failed run aborts the sweep with an error naming the pair.
std::vector<RunResult> runSweep(const ScenarioConfig& cfg);

struct SummaryRow
{
    double penetration;
    double meanTx;
    double meanPdr;
    std::optional<double> ratioVsZero; // meanTx(0 %) / meanTx(p)
};

std::vector<SummaryRow> summarize(const std::vector<RunResult>& results);

/// Per penetration: bin rows pooled over seeds and messages.
std::vector<std::pair<double, std::vector<BinRow>>> distanceTable(const ScenarioConfig& cfg,
                                                                   const std::vector<RunResult>& results);

/// Writes transmissions.csv, pdr.csv, pdr_distance.csv and summary.csv.
void writeCsvs(const ScenarioConfig& cfg, const std::vector<RunResult>& results, const std::filesystem::path& dir);

/// Convenience: runSweep followed by writeCsvs into cfg.outputDir.
std::vector<RunResult> runExperiment(const ScenarioConfig& cfg);

/// Layout of the distance bins for this scenario.
DistanceBins distanceBins(const ScenarioConfig& cfg);

} // namespace cbfsim
