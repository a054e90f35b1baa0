#include "manet/experiment.hpp"

#include "manet/errors.hpp"
#include "manet/simulation.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace manet {

namespace {

// The trace is the single source of truth for reports; the live counters
// must agree with it exactly or the simulator itself is broken.
void cross_check(const PhaseReport& rep, const Simulation& sim) {
    const Counters& live = sim.tallies();
    auto in_flight = sim.in_flight_by_flow();
    for (const auto& [flow, tally] : rep.flows) {
        FlowCounters c;
        if (auto it = live.flows.find(flow); it != live.flows.end()) c = it->second;
        std::uint64_t live_in_flight = in_flight.count(flow) ? in_flight.at(flow) : 0;
        if (tally.sent != c.emitted || tally.received != c.received ||
            tally.absorbed != c.absorbed || tally.no_route != c.no_route ||
            tally.link_break != c.link_break || tally.energy != c.energy ||
            tally.in_flight != live_in_flight)
            throw ConservationViolation("trace-derived tallies diverge from live counters for flow " +
                                        std::to_string(flow));
    }
    if (rep.detects != live.detects)
        throw ConservationViolation("trace DETECT count diverges from live counter");
    if (rep.energy_total_uj != sim.total_energy_spent_uj())
        throw ConservationViolation("trace energy total diverges from ledgers");
}

} // namespace

PhaseOutcome run_phase(const Scenario& scn, Phase phase, std::uint64_t seed,
                       const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    PhaseOutcome out;
    std::string base = std::string(to_string(phase));
    out.trace_path = (std::filesystem::path(out_dir) / (base + ".trace")).string();
    out.metrics_path = (std::filesystem::path(out_dir) / (base + ".metrics.csv")).string();

    FileTraceWriter trace(out.trace_path);
    Simulation sim(scn, phase, seed, trace);
    out.events = sim.run();

    auto records = read_trace(out.trace_path);
    out.report = phase_report(records, phase, scn.bucket);
    cross_check(out.report, sim);

    write_metrics_csv_file(out.metrics_path, out.report.series);

    out.live = sim.tallies();
    out.blacklisted = sim.blacklist_union();
    out.max_honest_seq = sim.max_honest_own_seq();
    out.energy_total_uj = sim.total_energy_spent_uj();
    return out;
}

ComparisonSummary compare_phases(const Scenario& scn, std::uint64_t seed,
                                 const std::string& out_dir) {
    ComparisonSummary summary;
    summary.baseline = run_phase(scn, Phase::Baseline, seed, out_dir);
    summary.attack = run_phase(scn, Phase::Attack, seed, out_dir);
    summary.defend = run_phase(scn, Phase::Defend, seed, out_dir);

    summary.received_ordering_ok = summary.baseline.report.received >= summary.defend.report.received &&
                                   summary.defend.report.received >= summary.attack.report.received;
    summary.energy_ordering_ok =
        summary.defend.energy_total_uj >= summary.attack.energy_total_uj;

    write_summary_csv((std::filesystem::path(out_dir) / "summary.csv").string(), summary);
    return summary;
}

void write_summary_csv(const std::string& path, const ComparisonSummary& summary) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open summary csv: " + path);
    out << "phase,sent,received,absorbed,no_route_drops,link_break_drops,energy_drops,"
           "in_flight,detects,blacklisted,energy_spent_j\n";
    for (const PhaseOutcome* o : {&summary.baseline, &summary.attack, &summary.defend}) {
        const PhaseReport& r = o->report;
        out << to_string(r.phase) << ',' << r.sent << ',' << r.received << ',' << r.absorbed << ','
            << r.no_route_drops << ',' << r.link_break_drops << ',' << r.energy_drops << ','
            << r.in_flight << ',' << r.detects << ',' << o->blacklisted.size() << ','
            << format_joules(o->energy_total_uj) << '\n';
    }
    if (!out) throw IoError("summary csv write failed: " + path);
}

void print_comparison(std::ostream& out, const ComparisonSummary& summary) {
    out << std::left << std::setw(10) << "phase" << std::right << std::setw(8) << "sent"
        << std::setw(10) << "received" << std::setw(10) << "absorbed" << std::setw(10) << "no_route"
        << std::setw(12) << "link_break" << std::setw(10) << "in_flight" << std::setw(9)
        << "detects" << std::setw(14) << "energy_j" << '\n';
    for (const PhaseOutcome* o : {&summary.baseline, &summary.attack, &summary.defend}) {
        const PhaseReport& r = o->report;
        out << std::left << std::setw(10) << to_string(r.phase) << std::right << std::setw(8)
            << r.sent << std::setw(10) << r.received << std::setw(10) << r.absorbed
            << std::setw(10) << r.no_route_drops << std::setw(12) << r.link_break_drops
            << std::setw(10) << r.in_flight << std::setw(9) << r.detects << std::setw(14)
            << format_joules(o->energy_total_uj) << '\n';
    }
    long long recv_delta = static_cast<long long>(summary.defend.report.received) -
                           static_cast<long long>(summary.attack.report.received);
    long long energy_delta = static_cast<long long>(summary.defend.energy_total_uj) -
                             static_cast<long long>(summary.attack.energy_total_uj);
    out << "delta received (defend - attack): " << recv_delta << '\n';
    out << "delta energy_j (defend - attack): " << format_joules(energy_delta < 0 ? 0 : energy_delta)
        << (energy_delta < 0 ? " (negative)" : "") << '\n';
    out << "assert received baseline >= defend >= attack: "
        << (summary.received_ordering_ok ? "PASS" : "FAIL") << '\n';
    out << "assert energy defend >= attack: " << (summary.energy_ordering_ok ? "PASS" : "FAIL")
        << '\n';
}

} // namespace manet
