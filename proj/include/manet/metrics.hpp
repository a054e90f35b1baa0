#pragma once

#include "manet/messages.hpp"
#include "manet/scenario.hpp"
#include "manet/trace.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace manet {

struct FlowTally {
    std::uint64_t sent = 0;
    std::uint64_t received = 0;
    std::uint64_t absorbed = 0;
    std::uint64_t no_route = 0;
    std::uint64_t link_break = 0;
    std::uint64_t energy = 0;
    std::uint64_t in_flight = 0; // sent minus everything accounted above
};

struct ThroughputPoint {
    SimTime bucket_end;
    std::uint64_t received_pkts = 0;  // in this bucket
    double received_bps = 0;          // bits delivered in this bucket / bucket seconds
    std::uint64_t cum_received = 0;   // running total
    std::uint64_t energy_spent_uj = 0; // network-wide cumulative at bucket end
    std::uint64_t detects_cum = 0;    // cumulative Malicious verdicts
};

// Per-phase aggregate, computed entirely from the trace file so the numbers
// are recomputable offline, bit-identically.
struct PhaseReport {
    Phase phase = Phase::Baseline;
    std::uint64_t sent = 0;
    std::uint64_t received = 0;
    std::uint64_t absorbed = 0;
    std::uint64_t no_route_drops = 0;
    std::uint64_t link_break_drops = 0;
    std::uint64_t energy_drops = 0;
    std::uint64_t in_flight = 0;
    std::uint64_t detects = 0;
    std::uint64_t energy_total_uj = 0;
    std::map<FlowId, FlowTally> flows;
    std::vector<ThroughputPoint> series;
};

// Received-traffic series plus cumulative energy/detects, bucketed over
// (0, sim_end]; sim_end is the largest timestamp in the trace (the engine
// guarantees a final bucket marker exactly at sim end).
std::vector<ThroughputPoint> bucketed_throughput(const std::vector<TraceRecord>& records,
                                                 Duration bucket);

// Aggregates and checks conservation per flow (throws ConservationViolation).
PhaseReport phase_report(const std::vector<TraceRecord>& records, Phase phase, Duration bucket);

// Metrics CSV: header
// bucket_end_us,received_pkts,received_bps,cum_received,energy_spent_j,detects
void write_metrics_csv(std::ostream& out, const std::vector<ThroughputPoint>& series);
void write_metrics_csv_file(const std::string& path, const std::vector<ThroughputPoint>& series);

std::string format_joules(std::uint64_t uj); // exact %.6f of integer microjoules

} // namespace manet
