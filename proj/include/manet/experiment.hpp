#pragma once

#include "manet/metrics.hpp"
#include "manet/node.hpp"
#include "manet/scenario.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace manet {

// One executed phase: the trace-derived report plus live-engine extras that
// the report alone cannot carry (blacklists, screen counts, file locations).
struct PhaseOutcome {
    PhaseReport report;
    std::string trace_path;
    std::string metrics_path;
    Counters live;
    std::vector<NodeId> blacklisted; // union over all sources
    SeqNo max_honest_seq = 0;
    std::uint64_t events = 0;
    std::uint64_t energy_total_uj = 0;
};

// Runs one phase of the scenario, writes <phase>.trace and
// <phase>.metrics.csv under out_dir, cross-checks the trace-derived report
// against the live counters, and returns both views.
PhaseOutcome run_phase(const Scenario& scn, Phase phase, std::uint64_t seed,
                       const std::string& out_dir);

struct ComparisonSummary {
    PhaseOutcome baseline;
    PhaseOutcome attack;
    PhaseOutcome defend;
    bool received_ordering_ok = false; // baseline >= defend >= attack (cumulative received)
    bool energy_ordering_ok = false;   // defend spends at least what attack does
};

// The paper's three-phase experiment: same scenario and seed, only the
// adversary/detection toggles differ. Writes summary.csv under out_dir.
ComparisonSummary compare_phases(const Scenario& scn, std::uint64_t seed,
                                 const std::string& out_dir);

void write_summary_csv(const std::string& path, const ComparisonSummary& summary);
void print_comparison(std::ostream& out, const ComparisonSummary& summary);

} // namespace manet
