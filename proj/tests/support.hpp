#pragma once

// Shared scaffolding for the unit, property and acceptance suites:
// scripted topologies, an in-memory run wrapper, and trace audits.

#include "manet/experiment.hpp"
#include "manet/rng.hpp"
#include "manet/scenario.hpp"
#include "manet/simulation.hpp"
#include "manet/trace.hpp"

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace manet::testing {

// Static 4-node chain 0-1-2-3, one flow 0 -> 3 (4 pkt/s over [1 s, 19 s)).
inline Scenario chain_scenario() {
    Scenario s;
    s.node_count = 4;
    s.terrain_w = 700;
    s.terrain_h = 100;
    s.range_m = 250;
    s.sim_time = SimTime::from_seconds(20);
    s.seed = 7;
    s.mobility.enabled = false;
    s.fixed_positions = {{0, {0, 0}}, {1, {200, 0}}, {2, {400, 0}}, {3, {600, 0}}};
    CbrFlow f;
    f.flow = 0;
    f.src = 0;
    f.dst = 3;
    f.start_at = SimTime::from_seconds(1);
    f.stop_at = SimTime::from_seconds(19);
    s.flows = {f};
    return s;
}

// Static diamond: source 0, honest arm 1, black hole 2, destination 3.
// Arms are out of range of each other; 0 and 3 are out of range.
inline Scenario diamond_scenario() {
    Scenario s;
    s.node_count = 4;
    s.terrain_w = 400;
    s.terrain_h = 300;
    s.range_m = 250;
    s.sim_time = SimTime::from_seconds(20);
    s.seed = 7;
    s.mobility.enabled = false;
    s.fixed_positions = {{0, {0, 150}}, {1, {200, 300}}, {2, {200, 0}}, {3, {400, 150}}};
    CbrFlow f;
    f.flow = 0;
    f.src = 0;
    f.dst = 3;
    f.start_at = SimTime::from_seconds(1);
    f.stop_at = SimTime::from_seconds(19);
    s.flows = {f};
    s.adversary.nodes = {2};
    return s;
}

// One in-memory phase run; keeps the writer, engine and parsed records alive
// together (the engine borrows the writer). Not movable; heap-allocate.
struct MiniRun {
    StringTraceWriter trace;
    std::unique_ptr<Simulation> sim;
    std::vector<TraceRecord> records;
    std::uint64_t events = 0;

    MiniRun(const MiniRun&) = delete;
    MiniRun& operator=(const MiniRun&) = delete;
    MiniRun() = default;
};

inline std::unique_ptr<MiniRun> run_mini(const Scenario& scn, Phase phase, std::uint64_t seed) {
    auto run = std::make_unique<MiniRun>();
    run->sim = std::make_unique<Simulation>(scn, phase, seed, run->trace);
    run->events = run->sim->run();
    run->records = parse_trace(run->trace.str());
    return run;
}

struct AuditFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The protocol invariants every run must satisfy, checked from the trace and
// the final engine state (sequence monotonicity, RREQ dedup, conservation,
// energy bounds, blacklist soundness, invalidation/trace agreement).
inline void audit_run(const MiniRun& run, const Scenario& scn, Phase phase) {
    const Simulation& sim = *run.sim;

    // Per-origin RREQ sequence numbers never decrease (they increase).
    std::map<NodeId, std::uint64_t> last_oseq;
    // Destination-generated reply seq per node never decreases.
    std::map<NodeId, std::uint64_t> last_dseq;
    // A node rebroadcasts a given (origin, rreq_id) at most once.
    std::set<std::tuple<NodeId, std::uint64_t, std::uint64_t>> rebroadcasts;
    std::uint64_t rerr_transitions = 0;

    for (const auto& r : run.records) {
        if (r.ev == TraceEv::SEND && r.get("kind") == "rreq") {
            std::uint64_t oseq = r.get_u64("oseq");
            auto it = last_oseq.find(r.node);
            if (it != last_oseq.end() && oseq < it->second)
                throw AuditFailure("origin seq decreased at node " + std::to_string(r.node));
            last_oseq[r.node] = oseq;
        }
        if (r.ev == TraceEv::SEND && r.get("kind") == "rrep" &&
            r.get_u64("dest") == r.node) { // destination-generated reply
            std::uint64_t seq = r.get_u64("seq");
            auto it = last_dseq.find(r.node);
            if (it != last_dseq.end() && seq < it->second)
                throw AuditFailure("destination reply seq decreased at node " +
                                   std::to_string(r.node));
            last_dseq[r.node] = seq;
        }
        if (r.ev == TraceEv::FWD && r.get("kind") == "rreq") {
            auto key = std::make_tuple(r.node, r.get_u64("origin"), r.get_u64("rreq"));
            if (!rebroadcasts.insert(key).second)
                throw AuditFailure("duplicate RREQ rebroadcast at node " + std::to_string(r.node));
        }
        if (r.ev == TraceEv::RERR) rerr_transitions += r.get_u64("n");
    }

    if (rerr_transitions != sim.tallies().invalidations)
        throw AuditFailure("route invalidations diverge from RERR trace lines");

    // Conservation, recomputed from the trace and cross-checked against the
    // live counters plus what is still in flight.
    PhaseReport rep = phase_report(run.records, phase, scn.bucket);
    auto in_flight = sim.in_flight_by_flow();
    for (const auto& [flow, tally] : rep.flows) {
        std::uint64_t live_if = in_flight.count(flow) ? in_flight.at(flow) : 0;
        if (tally.in_flight != live_if)
            throw AuditFailure("in-flight mismatch for flow " + std::to_string(flow));
    }

    for (NodeId n = 0; n < scn.node_count; ++n) {
        const EnergyLedger& l = sim.ledger(n);
        if (l.spent() > scn.energy.initial_uj) throw AuditFailure("energy over-spend");
        if (phase != Phase::Defend && l.spent_screen() != 0)
            throw AuditFailure("screen energy outside defend phase");
    }

    // Blacklists only ever contain configured adversaries.
    for (NodeId b : sim.blacklist_union()) {
        bool is_adv = std::binary_search(scn.adversary.nodes.begin(), scn.adversary.nodes.end(), b);
        if (!is_adv) throw AuditFailure("honest node " + std::to_string(b) + " blacklisted");
    }

    if (sim.max_honest_own_seq() >= (1u << 31)) throw AuditFailure("sequence number runaway");
}

// Uniformly random small scenario for the property suite.
inline Scenario random_scenario(DeterministicRng& g) {
    Scenario s;
    s.node_count = static_cast<std::uint32_t>(g.uniform_u64(4, 10));
    s.terrain_w = g.uniform_double(300, 700);
    s.terrain_h = g.uniform_double(200, 500);
    s.range_m = g.uniform_double(150, 300);
    s.sim_time = SimTime::from_seconds(g.uniform_double(2.0, 3.0));
    s.seed = g.next_u64();
    s.bucket = Duration::from_seconds(0.5);
    s.mobility.enabled = g.uniform_u64(0, 1) == 1;
    s.mobility.v_min = 1.0;
    s.mobility.v_max = g.uniform_double(2.0, 15.0);
    s.mobility.pause = Duration::from_seconds(g.uniform_double(0.2, 1.0));
    s.rrep_wait = Duration::from_seconds(0.5);

    std::uint32_t n_flows = static_cast<std::uint32_t>(g.uniform_u64(1, 2));
    std::set<NodeId> endpoints;
    for (std::uint32_t i = 0; i < n_flows; ++i) {
        CbrFlow f;
        f.flow = i;
        f.src = static_cast<NodeId>(g.uniform_u64(0, s.node_count - 1));
        f.dst = static_cast<NodeId>(g.uniform_u64(0, s.node_count - 1));
        if (f.src == f.dst) f.dst = (f.dst + 1) % s.node_count;
        f.rate_pps = g.uniform_double(2.0, 8.0);
        f.size_bytes = 256;
        f.start_at = SimTime::from_seconds(g.uniform_double(0.1, 0.5));
        f.stop_at = SimTime::from_seconds(g.uniform_double(1.0, 1.9));
        s.flows.push_back(f);
        endpoints.insert(f.src);
        endpoints.insert(f.dst);
    }
    std::uint32_t n_adv = static_cast<std::uint32_t>(g.uniform_u64(0, 2));
    for (std::uint32_t i = 0; i < n_adv; ++i) {
        NodeId m = static_cast<NodeId>(g.uniform_u64(0, s.node_count - 1));
        if (!endpoints.count(m)) s.adversary.nodes.push_back(m);
    }
    std::sort(s.adversary.nodes.begin(), s.adversary.nodes.end());
    s.adversary.nodes.erase(std::unique(s.adversary.nodes.begin(), s.adversary.nodes.end()),
                            s.adversary.nodes.end());
    // Occasionally a weak forgery that must slip past the gate.
    s.adversary.forged_seq = g.uniform_u64(0, 4) == 0 ? 500 : 1'000'000;
    validate_scenario(s);
    return s;
}

} // namespace manet::testing
