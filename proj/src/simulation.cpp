#include "manet/simulation.hpp"

#include "manet/errors.hpp"

#include <algorithm>
#include <cmath>

namespace manet {

namespace {
std::string s(std::uint64_t v) { return std::to_string(v); }

std::string_view body_kind(const FrameBody& body) {
    switch (body.index()) {
        case 0: return "rreq";
        case 1: return "rrep";
        case 2: return "rerr";
        default: return "data";
    }
}
} // namespace

Simulation::Simulation(const Scenario& scn, Phase phase, std::uint64_t seed, TraceWriter& trace)
    : scn_(scn),
      phase_(phase),
      adversary_on_(phase != Phase::Baseline && !scn.adversary.nodes.empty()),
      detection_on_(phase == Phase::Defend),
      mobility_(scn.node_count, scn.terrain_w, scn.terrain_h, scn.range_m, scn.mobility, seed,
                scn.fixed_positions),
      ledgers_(scn.node_count, EnergyLedger(scn.energy.initial_uj)),
      trace_(trace) {
    nodes_.reserve(scn.node_count);
    for (NodeId n = 0; n < scn.node_count; ++n) {
        bool malicious = adversary_on_ &&
                         std::binary_search(scn.adversary.nodes.begin(),
                                            scn.adversary.nodes.end(), n);
        nodes_.push_back(std::make_unique<AodvNode>(n, malicious, *this));
    }
}

bool Simulation::in_range(NodeId a, NodeId b) const { return mobility_.in_range(a, b, now()); }

void Simulation::debit(NodeId n, EnergyAction action, std::uint64_t cost) {
    bool was_alive = ledgers_[n].alive();
    ledgers_[n].debit(action, cost);
    if (was_alive && !ledgers_[n].alive())
        trace_.record(now(), TraceEv::ENERGY, n,
                      {{"event", "exhausted"}, {"spent", s(ledgers_[n].spent())}});
}

std::vector<NodeId> Simulation::broadcast(NodeId from, FrameBody body, std::uint32_t bytes) {
    if (!ledgers_[from].alive()) {
        // Senders normally gate on node_alive; this keeps the medium honest.
        trace_.record(now(), TraceEv::DROP, from,
                      {{"kind", std::string(body_kind(body))}, {"reason", "energy_exhausted"}});
        return {};
    }
    debit(from, EnergyAction::Tx, scn_.energy.tx_uj);
    std::vector<NodeId> receivers;
    Frame frame{from, std::move(body), bytes};
    for (NodeId n = 0; n < scn_.node_count; ++n) {
        if (n == from) continue;
        if (mobility_.in_range(from, n, now())) receivers.push_back(n);
    }
    for (NodeId n : receivers)
        queue_.schedule({now() + scn_.hop_delay, FrameDelivery{n, frame}});
    return receivers;
}

bool Simulation::unicast(NodeId from, NodeId to, FrameBody body, std::uint32_t bytes) {
    if (!ledgers_[from].alive()) {
        trace_.record(now(), TraceEv::DROP, from,
                      {{"kind", std::string(body_kind(body))}, {"reason", "energy_exhausted"}});
        return false;
    }
    if (!mobility_.in_range(from, to, now())) return false;
    debit(from, EnergyAction::Tx, scn_.energy.tx_uj);
    queue_.schedule({now() + scn_.hop_delay, FrameDelivery{to, Frame{from, std::move(body), bytes}}});
    return true;
}

void Simulation::defer_rrep(NodeId from, NodeId to, const Rrep& rrep, Duration delay) {
    queue_.schedule({now() + delay, DeferredUnicast{from, to, Frame{from, rrep, kRrepBytes}}});
}

void Simulation::arm_rrep_window(NodeId node, NodeId dest, std::uint32_t rreq_id,
                                 Duration window) {
    queue_.schedule({now() + window, TimerExpiry{node, TimerKind::RrepWindow, dest, rreq_id}});
}

void Simulation::debit_screen(NodeId node) {
    debit(node, EnergyAction::Screen, scn_.energy.screen_uj);
}

void Simulation::emit_energy_snapshot() {
    for (NodeId n = 0; n < scn_.node_count; ++n)
        trace_.record(now(), TraceEv::ENERGY, n, {{"spent", s(ledgers_[n].spent())}});
}

std::uint64_t Simulation::run() {
    if (ran_) throw SimInvariantError("Simulation::run called twice");
    ran_ = true;

    // Initial placement is part of the trace so offline tools can replay it.
    for (NodeId n = 0; n < scn_.node_count; ++n) {
        Position p = mobility_.position_at(n, SimTime{0});
        trace_.record(SimTime{0}, TraceEv::MOVE, n,
                      {{"x", fmt_meters(p.x)}, {"y", fmt_meters(p.y)}});
    }
    if (scn_.mobility.enabled) {
        for (NodeId n = 0; n < scn_.node_count; ++n) {
            const WaypointLeg& leg = mobility_.next_waypoint(n, SimTime{0});
            queue_.schedule({leg.arrive_at, WaypointArrival{n}});
        }
    }

    for (const CbrFlow& flow : scn_.flows) {
        auto interval = Duration{static_cast<std::uint64_t>(1e6 / flow.rate_pps + 0.5)};
        if (interval.us == 0) interval.us = 1;
        std::uint64_t k = 0;
        for (SimTime t = flow.start_at; t < flow.stop_at; t = t + interval, ++k)
            queue_.schedule({t, TrafficEmit{flow.flow, k}});
    }

    std::uint64_t bucket_index = 1;
    for (SimTime t{scn_.bucket.us}; t < scn_.sim_time; t.us += scn_.bucket.us)
        queue_.schedule({t, PhaseMarker{bucket_index++, t}});
    queue_.schedule({scn_.sim_time, PhaseMarker{bucket_index, scn_.sim_time}});

    std::uint64_t processed =
        queue_.run_until(scn_.sim_time, [this](SimTime t, EventPayload& p) { dispatch(t, p); });

    audit_conservation();
    trace_.finish();
    return processed;
}

void Simulation::dispatch(SimTime t, EventPayload& payload) {
    std::visit(
        [&](auto& ev) {
            using T = std::decay_t<decltype(ev)>;
            if constexpr (std::is_same_v<T, FrameDelivery>) {
                // Reception costs energy whether or not the frame is acted on.
                debit(ev.to, EnergyAction::Rx, scn_.energy.rx_uj);
                nodes_[ev.to]->on_frame(ev.frame);
            } else if constexpr (std::is_same_v<T, TimerExpiry>) {
                nodes_[ev.node]->on_rrep_window_closed(ev.dest, ev.rreq_id);
            } else if constexpr (std::is_same_v<T, TrafficEmit>) {
                auto fit = std::find_if(scn_.flows.begin(), scn_.flows.end(),
                                        [&](const CbrFlow& f) { return f.flow == ev.flow; });
                const CbrFlow& flow = *fit;
                DataPacket pkt;
                pkt.flow = flow.flow;
                pkt.src = flow.src;
                pkt.dst = flow.dst;
                pkt.packet_seq = ev.packet_seq;
                pkt.size_bytes = flow.size_bytes;
                pkt.created_at = t;
                nodes_[flow.src]->on_traffic_emit(pkt);
            } else if constexpr (std::is_same_v<T, WaypointArrival>) {
                Position p = mobility_.position_at(ev.node, t);
                trace_.record(t, TraceEv::MOVE, ev.node,
                              {{"x", fmt_meters(p.x)}, {"y", fmt_meters(p.y)}});
                const WaypointLeg& leg = mobility_.next_waypoint(ev.node, t);
                queue_.schedule({leg.arrive_at, WaypointArrival{ev.node}});
            } else if constexpr (std::is_same_v<T, PhaseMarker>) {
                emit_energy_snapshot();
            } else if constexpr (std::is_same_v<T, DeferredUnicast>) {
                nodes_[ev.from]->send_rrep(std::get<Rrep>(ev.frame.body), ev.to,
                                           /*forwarded=*/false);
            }
        },
        payload);
}

std::uint64_t Simulation::total_energy_spent_uj() const {
    std::uint64_t total = 0;
    for (const auto& l : ledgers_) total += l.spent();
    return total;
}

std::map<FlowId, std::uint64_t> Simulation::in_flight_by_flow() const {
    std::map<FlowId, std::uint64_t> out;
    for (const CbrFlow& f : scn_.flows) out[f.flow] = 0;
    queue_.for_each_pending([&](SimTime, const EventPayload& p) {
        if (const auto* fd = std::get_if<FrameDelivery>(&p))
            if (const auto* data = std::get_if<DataPacket>(&fd->frame.body))
                out[data->flow]++;
    });
    for (const auto& node : nodes_)
        for (const auto& f : scn_.flows) out[f.flow] += node->buffered(f.flow);
    return out;
}

std::vector<NodeId> Simulation::blacklist_union() const {
    std::vector<NodeId> out;
    for (const auto& node : nodes_)
        for (const auto& [id, when] : node->guard().blacklist_entries()) out.push_back(id);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

SeqNo Simulation::max_honest_own_seq() const {
    SeqNo m = 0;
    for (const auto& node : nodes_)
        if (!node->malicious()) m = std::max(m, node->own_seq());
    return m;
}

void Simulation::audit_conservation() const {
    auto in_flight = in_flight_by_flow();
    for (const CbrFlow& f : scn_.flows) {
        const FlowCounters zero{};
        auto it = counters_.flows.find(f.flow);
        const FlowCounters& c = it == counters_.flows.end() ? zero : it->second;
        std::uint64_t accounted =
            c.received + c.absorbed + c.no_route + c.link_break + c.energy + in_flight.at(f.flow);
        if (accounted != c.emitted)
            throw ConservationViolation(
                "flow " + s(f.flow) + ": emitted " + s(c.emitted) + " != accounted " +
                s(accounted) + " (recv " + s(c.received) + " absorbed " + s(c.absorbed) +
                " no_route " + s(c.no_route) + " link_break " + s(c.link_break) + " energy " +
                s(c.energy) + " in_flight " + s(in_flight.at(f.flow)) + ")");
    }
}

} // namespace manet
