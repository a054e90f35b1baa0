#pragma once

#include "manet/energy.hpp"
#include "manet/events.hpp"
#include "manet/mobility.hpp"
#include "manet/node.hpp"
#include "manet/scenario.hpp"
#include "manet/trace.hpp"

#include <memory>
#include <vector>

namespace manet {

// One phase run: deterministic single-threaded event loop over an idealized
// broadcast medium. A run is a pure function of (scenario, phase, seed); the
// trace it emits is byte-identical across repeats.
class Simulation final : public SimContext {
public:
    Simulation(const Scenario& scn, Phase phase, std::uint64_t seed, TraceWriter& trace);

    // Schedules traffic, mobility and bucket markers, runs to sim_time,
    // audits conservation and finishes the trace. Returns events processed.
    std::uint64_t run();

    // SimContext
    SimTime now() const override { return queue_.now(); }
    const Scenario& config() const override { return scn_; }
    bool adversary_enabled() const override { return adversary_on_; }
    bool detection_enabled() const override { return detection_on_; }
    bool node_alive(NodeId n) const override { return ledgers_[n].alive(); }
    bool in_range(NodeId a, NodeId b) const override;
    std::vector<NodeId> broadcast(NodeId from, FrameBody body, std::uint32_t bytes) override;
    bool unicast(NodeId from, NodeId to, FrameBody body, std::uint32_t bytes) override;
    void defer_rrep(NodeId from, NodeId to, const Rrep& rrep, Duration delay) override;
    void arm_rrep_window(NodeId node, NodeId dest, std::uint32_t rreq_id,
                         Duration window) override;
    void debit_screen(NodeId node) override;
    TraceWriter& trace() override { return trace_; }
    Counters& counters() override { return counters_; }

    // Inspection for tests, audits and reports.
    const AodvNode& node(NodeId n) const { return *nodes_[n]; }
    AodvNode& node(NodeId n) { return *nodes_[n]; }
    const EnergyLedger& ledger(NodeId n) const { return ledgers_[n]; }
    const Counters& tallies() const { return counters_; }
    const MobilityField& mobility() const { return mobility_; }
    EventQueue& queue() { return queue_; }
    Phase phase() const { return phase_; }

    std::uint64_t total_energy_spent_uj() const;
    std::map<FlowId, std::uint64_t> in_flight_by_flow() const; // in-air + buffered
    std::vector<NodeId> blacklist_union() const;
    SeqNo max_honest_own_seq() const;

private:
    void dispatch(SimTime t, EventPayload& payload);
    void debit(NodeId n, EnergyAction action, std::uint64_t cost);
    void emit_energy_snapshot();
    void audit_conservation() const;

    const Scenario& scn_;
    Phase phase_;
    bool adversary_on_;
    bool detection_on_;

    EventQueue queue_;
    MobilityField mobility_;
    std::vector<EnergyLedger> ledgers_;
    std::vector<std::unique_ptr<AodvNode>> nodes_;
    TraceWriter& trace_;
    Counters counters_;
    bool ran_ = false;
};

} // namespace manet
