#include "cbfsim/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace cbfsim
{

namespace
{

std::string fixed(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::ofstream openCsv(const std::filesystem::path& path, const char* header)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
    {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << header << '\n';
    return out;
}

} // namespace

DistanceBins distanceBins(const ScenarioConfig& cfg)
{
    const DestinationArea area = cfg.highway.destinationArea();
    // The source stands at the area centre.
    return DistanceBins(area, area.centerX, cfg.binWidth);
}

RunResult runOnce(const ScenarioConfig& cfg, double penetration, std::uint64_t seed, const RunHook& hook)
{
    const auto started = std::chrono::steady_clock::now();
    HighwayConfig highway = cfg.highway;
    highway.penetrationR2 = penetration;
    Fleet fleet = buildFleet(highway, seed);

    const SimulationConfig simCfg = cfg.simulationConfig();
    Simulation sim(simCfg, std::move(fleet), seed);
    MetricsCollector metrics(sim.fleet(), simCfg.area, cfg.binWidth);
    sim.attachTrace(metrics);
    sim.setListener(&metrics);
    if (hook)
    {
        hook(sim);
    }
    sim.run();

    RunResult result;
    result.penetration = penetration;
    result.seed = seed;
    result.reports = metrics.reports();
    result.framesSent = sim.channel().framesSent();
    result.eventsProcessed = sim.scheduler().processedCount();
    result.wallSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

std::vector<RunResult> runSweep(const ScenarioConfig& cfg)
{
    cfg.validate();
    std::vector<std::pair<double, std::uint64_t>> tasks;
    for (const double p : cfg.penetrations)
    {
        for (const std::uint64_t seed : cfg.seeds)
        {
            tasks.emplace_back(p, seed);
        }
    }

    std::vector<RunResult> results(tasks.size());
    unsigned workers = cfg.jobs != 0 ? cfg.jobs : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(tasks.size()));

    std::atomic<std::size_t> next{0};
    std::mutex failureMutex;
    std::exception_ptr failure;
    std::string failedRun;

    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++)
        {
            {
                std::lock_guard lock(failureMutex);
                if (failure)
                {
                    return;
                }
            }
            const auto [p, seed] = tasks[i];
            try
            {
                results[i] = runOnce(cfg, p, seed);
            }
            catch (...)
            {
                std::lock_guard lock(failureMutex);
                if (!failure)
                {
                    failure = std::current_exception();
                    failedRun = "penetration " + fixed(p, 2) + ", seed " + std::to_string(seed);
                }
                return;
            }
        }
    };

    if (workers <= 1)
    {
        worker();
    }
    else
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
        {
            pool.emplace_back(worker);
        }
    }

    if (failure)
    {
        try
        {
            std::rethrow_exception(failure);
        }
        catch (const std::exception& e)
        {
            throw std::runtime_error("run failed (" + failedRun + "): " + e.what());
        }
    }
    return results;
}

std::vector<SummaryRow> summarize(const std::vector<RunResult>& results)
{
    struct Acc
    {
        double tx = 0.0;
        double pdr = 0.0;
        std::size_t n = 0;
    };
    std::map<double, Acc> byPenetration;
    for (const auto& run : results)
    {
        Acc& acc = byPenetration[run.penetration];
        for (const auto& report : run.reports)
        {
            acc.tx += static_cast<double>(computeTxCount(report));
            acc.pdr += computePdr(report);
            ++acc.n;
        }
    }
    std::vector<SummaryRow> rows;
    for (const auto& [p, acc] : byPenetration)
    {
        const double n = acc.n == 0 ? 1.0 : static_cast<double>(acc.n);
        rows.push_back(SummaryRow{p, acc.tx / n, acc.pdr / n, std::nullopt});
    }
    const auto zero = std::find_if(rows.begin(), rows.end(), [](const SummaryRow& r) { return r.penetration == 0.0; });
    if (zero != rows.end())
    {
        const double base = zero->meanTx;
        for (auto& row : rows)
        {
            if (row.meanTx > 0.0)
            {
                row.ratioVsZero = base / row.meanTx;
            }
        }
    }
    return rows;
}

std::vector<std::pair<double, std::vector<BinRow>>> distanceTable(const ScenarioConfig& cfg,
                                                                   const std::vector<RunResult>& results)
{
    const DistanceBins layout = distanceBins(cfg);
    std::map<double, std::vector<std::vector<MessageReport>>> grouped;
    for (const auto& run : results)
    {
        grouped[run.penetration].push_back(run.reports);
    }
    std::vector<std::pair<double, std::vector<BinRow>>> table;
    for (const auto& [p, runs] : grouped)
    {
        table.emplace_back(p, pdrDistanceBins(runs, layout));
    }
    return table;
}

void writeCsvs(const ScenarioConfig& cfg, const std::vector<RunResult>& results, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);

    auto tx = openCsv(dir / "transmissions.csv", "penetration,seed,message,tx_count");
    auto pdr = openCsv(dir / "pdr.csv", "penetration,seed,message,pdr");
    for (const auto& run : results)
    {
        for (const auto& report : run.reports)
        {
            tx << fixed(run.penetration, 2) << ',' << run.seed << ',' << report.id.sn << ','
               << computeTxCount(report) << '\n';
            pdr << fixed(run.penetration, 2) << ',' << run.seed << ',' << report.id.sn << ','
                << fixed(computePdr(report), 6) << '\n';
        }
    }

    auto dist = openCsv(dir / "pdr_distance.csv", "penetration,distance_bin_m,mean_pdr");
    for (const auto& [p, rows] : distanceTable(cfg, results))
    {
        for (const auto& row : rows)
        {
            dist << fixed(p, 2) << ',' << fixed(row.distance, 0) << ',' << fixed(row.meanPdr, 6) << '\n';
        }
    }

    auto summary = openCsv(dir / "summary.csv", "penetration,mean_tx,mean_pdr,ratio_vs_0pct");
    for (const auto& row : summarize(results))
    {
        summary << fixed(row.penetration, 2) << ',' << fixed(row.meanTx, 3) << ',' << fixed(row.meanPdr, 6) << ','
                << (row.ratioVsZero ? fixed(*row.ratioVsZero, 3) : std::string{}) << '\n';
    }
}

std::vector<RunResult> runExperiment(const ScenarioConfig& cfg)
{
    auto results = runSweep(cfg);
    writeCsvs(cfg, results, cfg.outputDir);
    return results;
}

} // namespace cbfsim
