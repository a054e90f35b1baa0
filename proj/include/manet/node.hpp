#pragma once

#include "manet/detection.hpp"
#include "manet/messages.hpp"
#include "manet/routing_table.hpp"
#include "manet/scenario.hpp"
#include "manet/sim_time.hpp"
#include "manet/trace.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <vector>

namespace manet {

struct FlowCounters {
    std::uint64_t emitted = 0;
    std::uint64_t received = 0;
    std::uint64_t absorbed = 0;
    std::uint64_t no_route = 0;
    std::uint64_t link_break = 0;
    std::uint64_t energy = 0;
};

struct Counters {
    std::map<FlowId, FlowCounters> flows;
    std::uint64_t screens = 0;       // verdicted screen_rrep calls
    std::uint64_t detects = 0;       // Malicious verdicts
    std::uint64_t invalidations = 0; // route Valid -> Invalid transitions
    std::uint64_t forged_rreps = 0;  // replies generated by black holes
};

// What a node needs from the engine: clock, medium, timers, energy, trace.
class SimContext {
public:
    virtual ~SimContext() = default;

    virtual SimTime now() const = 0;
    virtual const Scenario& config() const = 0;
    virtual bool adversary_enabled() const = 0;
    virtual bool detection_enabled() const = 0;

    virtual bool node_alive(NodeId n) const = 0;
    virtual bool in_range(NodeId a, NodeId b) const = 0;

    // Medium. Senders must be alive (callers gate on node_alive and emit the
    // DROP line themselves); unicast returns false when `to` is out of range.
    virtual std::vector<NodeId> broadcast(NodeId from, FrameBody body, std::uint32_t bytes) = 0;
    virtual bool unicast(NodeId from, NodeId to, FrameBody body, std::uint32_t bytes) = 0;
    virtual void defer_rrep(NodeId from, NodeId to, const Rrep& rrep, Duration delay) = 0;

    virtual void arm_rrep_window(NodeId node, NodeId dest, std::uint32_t rreq_id,
                                 Duration window) = 0;
    virtual void debit_screen(NodeId node) = 0;

    virtual TraceWriter& trace() = 0;
    virtual Counters& counters() = 0;
};

// Per-node AODV state machine. Honest nodes run route discovery, forwarding
// and error reporting; a black hole overrides the RREQ and data paths
// (forged replies, silent absorption) and keeps no routing state at all.
// In the defend phase a flow source additionally screens every reply for its
// own discoveries through the detection guard.
class AodvNode {
public:
    AodvNode(NodeId id, bool malicious, SimContext& ctx);

    // Entry point for every delivered frame (blacklist filter lives here).
    void on_frame(const Frame& frame);

    // CBR emission at the flow source.
    void on_traffic_emit(const DataPacket& pkt);

    void on_rrep_window_closed(NodeId dest, std::uint32_t rreq_id);

    // Deferred adversary reply (reply_delay > 0) lands here.
    void send_rrep(const Rrep& rrep, NodeId to, bool forwarded);

    // Starts a discovery unless a Valid route already exists.
    void originate_discovery(NodeId dest);

    NodeId id() const { return id_; }
    bool malicious() const { return malicious_; }
    SeqNo own_seq() const { return own_seq_; }
    std::uint32_t last_rreq_id() const { return rreq_id_; }
    const RoutingTable& table() const { return table_; }
    const DetectionGuard& guard() const { return guard_; }
    std::uint64_t buffered(FlowId flow) const;
    std::uint64_t buffered_total() const;
    bool discovery_pending(NodeId dest) const { return pending_.count(dest) > 0; }

private:
    void handle_rreq(const Rreq& rreq, NodeId from);
    void handle_rrep(const Rrep& rrep, NodeId from);
    void handle_rerr(const Rerr& rerr, NodeId from);
    void handle_data(const DataPacket& pkt, NodeId from);

    void forge_reply(const Rreq& rreq, NodeId from);
    void forward_data(const DataPacket& pkt);
    void buffer_packet(const DataPacket& pkt);
    void flush_buffer(NodeId dest);
    void on_link_break(NodeId next_hop);
    void screen_and_apply(const Rrep& rrep, NodeId from);
    void reroute(NodeId dest);
    bool try_update_route(const RouteEntry& candidate);
    const RouteEntry* valid_route(NodeId dest);
    void bump_own_seq();

    NodeId id_;
    bool malicious_;
    SimContext& ctx_;

    SeqNo own_seq_ = 0;
    std::uint32_t rreq_id_ = 0;
    RoutingTable table_;
    std::map<std::pair<NodeId, std::uint32_t>, SimTime> rreq_seen_; // (origin, id) -> expiry

    struct PendingDiscovery {
        std::uint32_t rreq_id = 0;
        SimTime window_end;
    };
    std::map<NodeId, PendingDiscovery> pending_;

    std::map<NodeId, std::deque<DataPacket>> buffer_; // keyed by destination
    DetectionGuard guard_;
};

} // namespace manet
