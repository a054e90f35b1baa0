#include "manet/errors.hpp"
#include "manet/experiment.hpp"
#include "manet/metrics.hpp"
#include "manet/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

// Exit codes: 0 ok, 1 validation/parse, 2 runtime invariant, 3 I/O.
int run(int argc, char** argv) {
    CLI::App app{"AODV black-hole attack/defense simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = "out";
    std::string phase_name = "baseline";
    std::string trace_path;
    std::int64_t seed_override = -1;
    double bucket_ms = 500.0;

    auto* simulate = app.add_subcommand("simulate", "run one phase of a scenario");
    simulate->add_option("--scenario", scenario_path, "scenario file")->required();
    simulate->add_option("--phase", phase_name, "baseline|attack|defend")->required();
    simulate->add_option("--seed", seed_override, "override the scenario seed");
    simulate->add_option("--out", out_dir, "output directory")->required();

    auto* compare = app.add_subcommand("compare", "run all three phases with one seed");
    compare->add_option("--scenario", scenario_path, "scenario file")->required();
    compare->add_option("--seed", seed_override, "override the scenario seed");
    compare->add_option("--out", out_dir, "output directory")->required();

    auto* analyze = app.add_subcommand("analyze", "recompute the metrics CSV from a trace");
    analyze->add_option("--trace", trace_path, "trace file")->required();
    analyze->add_option("--bucket-ms", bucket_ms, "bucket width in milliseconds")
        ->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    if (simulate->parsed()) {
        manet::Scenario scn = manet::load_scenario(scenario_path);
        std::uint64_t seed = seed_override >= 0 ? static_cast<std::uint64_t>(seed_override)
                                                : scn.seed;
        manet::Phase phase = manet::phase_from_string(phase_name);
        manet::PhaseOutcome outcome = manet::run_phase(scn, phase, seed, out_dir);
        const manet::PhaseReport& r = outcome.report;
        std::cout << manet::to_string(phase) << ": sent=" << r.sent << " received=" << r.received
                  << " absorbed=" << r.absorbed << " no_route=" << r.no_route_drops
                  << " link_break=" << r.link_break_drops << " in_flight=" << r.in_flight
                  << " detects=" << r.detects
                  << " energy_j=" << manet::format_joules(outcome.energy_total_uj) << '\n';
        std::cout << "trace: " << outcome.trace_path << '\n';
        std::cout << "metrics: " << outcome.metrics_path << '\n';
        return 0;
    }
    if (compare->parsed()) {
        manet::Scenario scn = manet::load_scenario(scenario_path);
        std::uint64_t seed = seed_override >= 0 ? static_cast<std::uint64_t>(seed_override)
                                                : scn.seed;
        manet::ComparisonSummary summary = manet::compare_phases(scn, seed, out_dir);
        manet::print_comparison(std::cout, summary);
        return 0;
    }
    // analyze
    auto records = manet::read_trace(trace_path);
    auto series = manet::bucketed_throughput(records, manet::Duration::from_ms(bucket_ms));
    manet::write_metrics_csv(std::cout, series);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const manet::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 1;
    } catch (const manet::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 1;
    } catch (const manet::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 3;
    } catch (const manet::SimInvariantError& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
