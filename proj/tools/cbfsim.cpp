// Command-line front end: scenario sweeps and the line smoke scenario.

#include "cbfsim/experiment.hpp"
#include "cbfsim/line_scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

using namespace cbfsim;

namespace
{

int runCommand(const std::string& scenarioPath, const std::vector<double>& penetrations,
               const std::vector<std::uint64_t>& seeds, const std::optional<double>& densityScale,
               const std::string& out, const std::optional<unsigned>& jobs)
{
    ScenarioConfig cfg = loadScenario(scenarioPath);
    if (!penetrations.empty())
    {
        cfg.penetrations = penetrations;
    }
    if (!seeds.empty())
    {
        cfg.seeds = seeds;
    }
    if (densityScale)
    {
        cfg.highway.densityScale = *densityScale;
    }
    if (!out.empty())
    {
        cfg.outputDir = out;
    }
    if (jobs)
    {
        cfg.jobs = *jobs;
    }
    cfg.validate();

    const auto results = runExperiment(cfg);
    for (const auto& run : results)
    {
        std::fprintf(stderr, "p=%.2f seed=%llu messages=%zu frames=%llu events=%llu wall=%.1fs\n", run.penetration,
                     static_cast<unsigned long long>(run.seed), run.reports.size(),
                     static_cast<unsigned long long>(run.framesSent),
                     static_cast<unsigned long long>(run.eventsProcessed), run.wallSeconds);
    }
    std::printf("penetration,mean_tx,mean_pdr,ratio_vs_0pct\n");
    for (const auto& row : summarize(results))
    {
        std::printf("%.2f,%.3f,%.6f,%s\n", row.penetration, row.meanTx, row.meanPdr,
                    row.ratioVsZero ? std::to_string(*row.ratioVsZero).c_str() : "");
    }
    std::printf("CSV files written to %s\n", cfg.outputDir.string().c_str());
    return 0;
}

int smokeCommand()
{
    for (const Release release : {Release::R1, Release::R2})
    {
        LineScenario scenario;
        scenario.release = release;
        const LineOutcome outcome = runLineScenario(scenario);
        std::printf("%s: source tx at %lld us\n", nameOf(release),
                    static_cast<long long>(toMicros(outcome.sourceTxStart)));
        for (const auto& fwd : outcome.forwards)
        {
            std::printf("  node %u at x=%.0f m: timer expired %lld us, tx start %lld us\n", index(fwd.node),
                        scenario.positions[index(fwd.node)], static_cast<long long>(toMicros(fwd.decidedAt)),
                        static_cast<long long>(toMicros(fwd.txStart)));
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Area contention-based forwarding simulator (Release 1 / Release 2 coexistence)"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run a scenario sweep and write CSV metrics");
    std::string scenarioPath;
    std::vector<double> penetrations;
    std::vector<std::uint64_t> seeds;
    std::optional<double> densityScale;
    std::string out;
    std::optional<unsigned> jobs;
    run->add_option("scenario", scenarioPath, "Scenario file (INI format)")->required()->check(CLI::ExistingFile);
    run->add_option("--penetration", penetrations, "Release 2 penetration rate(s) in [0, 1]; overrides the sweep");
    run->add_option("--seed", seeds, "Seed(s); overrides the scenario's list");
    run->add_option("--density-scale", densityScale, "Scale factor applied to the per-lane density");
    run->add_option("--out", out, "Output directory for CSV files");
    run->add_option("--jobs", jobs, "Parallel runs (0 = one per hardware thread)");

    auto* smoke = app.add_subcommand("smoke", "Run the five-node line scenario for both releases");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*run)
        {
            return runCommand(scenarioPath, penetrations, seeds, densityScale, out, jobs);
        }
        if (*smoke)
        {
            return smokeCommand();
        }
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
