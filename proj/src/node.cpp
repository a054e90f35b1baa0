#include "manet/node.hpp"

#include "manet/errors.hpp"

#include <algorithm>

namespace manet {

namespace {

std::string_view kind_of(const FrameBody& body) {
    switch (body.index()) {
        case 0: return "rreq";
        case 1: return "rrep";
        case 2: return "rerr";
        default: return "data";
    }
}

std::string s(std::uint64_t v) { return std::to_string(v); }

} // namespace

AodvNode::AodvNode(NodeId id, bool malicious, SimContext& ctx)
    : id_(id), malicious_(malicious), ctx_(ctx), guard_(id) {}

void AodvNode::bump_own_seq() {
    // 20 s runs cannot approach wraparound; treat it as a simulator bug.
    if (own_seq_ >= (1u << 31))
        throw SimInvariantError("own sequence number out of sane range");
    ++own_seq_;
}

std::uint64_t AodvNode::buffered(FlowId flow) const {
    std::uint64_t n = 0;
    for (const auto& [dest, q] : buffer_)
        n += static_cast<std::uint64_t>(
            std::count_if(q.begin(), q.end(), [&](const DataPacket& p) { return p.flow == flow; }));
    return n;
}

std::uint64_t AodvNode::buffered_total() const {
    std::uint64_t n = 0;
    for (const auto& [dest, q] : buffer_) n += q.size();
    return n;
}

const RouteEntry* AodvNode::valid_route(NodeId dest) {
    return table_.valid_route(dest, ctx_.now(), [this](const RouteEntry& e) {
        ctx_.counters().invalidations++;
        ctx_.trace().record(ctx_.now(), TraceEv::RERR, id_,
                            {{"dest", s(e.dest)}, {"n", "1"}, {"reason", "expired"}});
    });
}

bool AodvNode::try_update_route(const RouteEntry& candidate) {
    if (ctx_.detection_enabled()) {
        // Never select a blacklisted node as next hop.
        if (guard_.is_blacklisted(candidate.next_hop)) return false;
        // Route-learning hygiene: an advertised freshness beyond the screening
        // threshold never enters the table, so forged sequence numbers cannot
        // resurface later as honest cached replies.
        if (candidate.dest_seq > ctx_.config().detection.threshold) return false;
    }
    return table_.update(candidate);
}

// ---------------------------------------------------------------- frames --

void AodvNode::on_frame(const Frame& frame) {
    // Delivery-level exclusion: frames from blacklisted nodes are ignored.
    if (guard_.is_blacklisted(frame.sender)) {
        ctx_.trace().record(ctx_.now(), TraceEv::DROP, id_,
                            {{"kind", std::string(kind_of(frame.body))},
                             {"reason", "blacklisted"},
                             {"sender", s(frame.sender)}});
        return;
    }
    std::visit(
        [&](const auto& body) {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, Rreq>) handle_rreq(body, frame.sender);
            else if constexpr (std::is_same_v<T, Rrep>) handle_rrep(body, frame.sender);
            else if constexpr (std::is_same_v<T, Rerr>) handle_rerr(body, frame.sender);
            else handle_data(body, frame.sender);
        },
        frame.body);
}

// ----------------------------------------------------------------- RREQ ---

void AodvNode::handle_rreq(const Rreq& rreq, NodeId from) {
    if (malicious_) {
        forge_reply(rreq, from);
        return;
    }

    // Duplicate flood copies are ignored.
    auto key = std::make_pair(rreq.origin, rreq.rreq_id);
    if (auto it = rreq_seen_.find(key); it != rreq_seen_.end() && ctx_.now() <= it->second)
        return;
    rreq_seen_[key] = ctx_.now() + ctx_.config().dedup_expiry;

    // Reverse route toward the origin via the node we heard this copy from.
    RouteEntry rev;
    rev.dest = rreq.origin;
    rev.next_hop = from;
    rev.hop_count = rreq.hop_count + 1;
    rev.dest_seq = rreq.origin_seq;
    rev.expires_at = ctx_.now() + ctx_.config().route_lifetime;
    try_update_route(rev);

    if (rreq.dest == id_) {
        // Destination answers with its own fresh sequence number.
        bump_own_seq();
        Rrep rep;
        rep.dest = id_;
        rep.dest_seq = own_seq_;
        rep.origin = rreq.origin;
        rep.hop_count = 0;
        rep.lifetime = ctx_.config().route_lifetime;
        rep.replier = id_;
        send_rrep(rep, from, /*forwarded=*/false);
        return;
    }

    const RouteEntry* cached = valid_route(rreq.dest);
    if (cached && (!rreq.last_known_dest_seq || cached->dest_seq >= *rreq.last_known_dest_seq)) {
        // Fresh-enough cached route: reply instead of rebroadcasting.
        Rrep rep;
        rep.dest = rreq.dest;
        rep.dest_seq = cached->dest_seq;
        rep.origin = rreq.origin;
        rep.hop_count = cached->hop_count;
        rep.lifetime = ctx_.config().route_lifetime;
        rep.replier = id_;
        send_rrep(rep, from, /*forwarded=*/false);
        return;
    }

    // Network-wide flood, TTL = node count.
    if (rreq.hop_count + 1 > ctx_.config().node_count) return;
    Rreq fwd = rreq;
    fwd.hop_count += 1;
    if (!ctx_.node_alive(id_)) {
        ctx_.trace().record(ctx_.now(), TraceEv::DROP, id_,
                            {{"kind", "rreq"}, {"reason", "energy_exhausted"}});
        return;
    }
    ctx_.trace().record(ctx_.now(), TraceEv::FWD, id_,
                        {{"dest", s(fwd.dest)},
                         {"hops", s(fwd.hop_count)},
                         {"kind", "rreq"},
                         {"origin", s(fwd.origin)},
                         {"rreq", s(fwd.rreq_id)}});
    ctx_.broadcast(id_, fwd, kRreqBytes);
}

void AodvNode::forge_reply(const Rreq& rreq, NodeId from) {
    // No routing-table read or write: the forged reply claims a one-hop route
    // to the destination with a sequence number far above anything honest.
    const AdversaryConfig& adv = ctx_.config().adversary;
    Rrep rep;
    rep.dest = rreq.dest;
    rep.dest_seq = adv.forged_seq;
    rep.origin = rreq.origin;
    rep.hop_count = 1;
    rep.lifetime = ctx_.config().route_lifetime;
    rep.replier = id_;
    ctx_.counters().forged_rreps++;
    if (adv.reply_delay.us == 0) {
        send_rrep(rep, from, /*forwarded=*/false);
    } else {
        ctx_.defer_rrep(id_, from, rep, adv.reply_delay);
    }
}

void AodvNode::send_rrep(const Rrep& rrep, NodeId to, bool forwarded) {
    if (!ctx_.node_alive(id_)) {
        ctx_.trace().record(ctx_.now(), TraceEv::DROP, id_,
                            {{"kind", "rrep"}, {"reason", "energy_exhausted"}});
        return;
    }
    if (!ctx_.in_range(id_, to)) {
        ctx_.trace().record(ctx_.now(), TraceEv::DROP, id_,
                            {{"kind", "rrep"}, {"reason", "no_reverse_path"}, {"to", s(to)}});
        return;
    }
    ctx_.trace().record(ctx_.now(), forwarded ? TraceEv::FWD : TraceEv::SEND, id_,
                        {{"dest", s(rrep.dest)},
                         {"hops", s(rrep.hop_count)},
                         {"kind", "rrep"},
                         {"origin", s(rrep.origin)},
                         {"replier", s(rrep.replier)},
                         {"seq", s(rrep.dest_seq)},
                         {"to", s(to)}});
    ctx_.unicast(id_, to, rrep, kRrepBytes);
}

// ----------------------------------------------------------------- RREP ---

void AodvNode::handle_rrep(const Rrep& rrep, NodeId from) {
    if (rrep.origin == id_) {
        if (ctx_.detection_enabled()) {
            screen_and_apply(rrep, from);
            return;
        }
        RouteEntry cand;
        cand.dest = rrep.dest;
        cand.next_hop = from;
        cand.hop_count = rrep.hop_count + 1;
        cand.dest_seq = rrep.dest_seq;
        cand.expires_at = ctx_.now() + rrep.lifetime;
        if (try_update_route(cand)) flush_buffer(rrep.dest);
        return;
    }

    // Relay on the reverse path: learn the forward route, pass the reply on.
    RouteEntry cand;
    cand.dest = rrep.dest;
    cand.next_hop = from;
    cand.hop_count = rrep.hop_count + 1;
    cand.dest_seq = rrep.dest_seq;
    cand.expires_at = ctx_.now() + rrep.lifetime;
    try_update_route(cand);

    const RouteEntry* rev = valid_route(rrep.origin);
    if (!rev) {
        ctx_.trace().record(ctx_.now(), TraceEv::DROP, id_,
                            {{"kind", "rrep"}, {"origin", s(rrep.origin)},
                             {"reason", "no_reverse_path"}});
        return;
    }
    Rrep fwd = rrep;
    fwd.hop_count += 1;
    send_rrep(fwd, rev->next_hop, /*forwarded=*/true);
}

void AodvNode::screen_and_apply(const Rrep& rrep, NodeId from) {
    // Replies from already-flagged nodes are discarded without a new verdict
    // (their direct frames never even reach here; this catches relayed ones).
    if (guard_.is_blacklisted(rrep.replier)) {
        ctx_.trace().record(ctx_.now(), TraceEv::DROP, id_,
                            {{"kind", "rrep"}, {"reason", "blacklisted"},
                             {"sender", s(rrep.replier)}});
        return;
    }
    const TimeKeeperRecord* rec = guard_.latest_record(rrep.dest);
    if (!rec) {
        ctx_.trace().record(ctx_.now(), TraceEv::DROP, id_,
                            {{"kind", "rrep"}, {"reason", "no_record"}});
        return;
    }
    ctx_.debit_screen(id_);
    ctx_.counters().screens++;
    Verdict v = screen_value_verdict(rrep, *rec, ctx_.now(), ctx_.config().detection);
    if (v == Verdict::Stale) {
        ctx_.trace().record(ctx_.now(), TraceEv::DROP, id_,
                            {{"kind", "rrep"}, {"reason", "stale_rrep"},
                             {"replier", s(rrep.replier)}});
        return;
    }
    if (v == Verdict::Malicious) {
        ctx_.counters().detects++;
        ctx_.trace().record(ctx_.now(), TraceEv::DETECT, id_,
                            {{"seq", s(rrep.dest_seq)},
                             {"suspect", s(rrep.replier)},
                             {"threshold", s(ctx_.config().detection.threshold)}});
        guard_.blacklist(rrep.replier, ctx_.now());
        reroute(rrep.dest);
        return;
    }
    RouteEntry cand;
    cand.dest = rrep.dest;
    cand.next_hop = from;
    cand.hop_count = rrep.hop_count + 1;
    cand.dest_seq = rrep.dest_seq;
    cand.expires_at = ctx_.now() + rrep.lifetime;
    if (try_update_route(cand)) flush_buffer(rrep.dest);
}

void AodvNode::reroute(NodeId dest) {
    // Purge every route through any blacklisted node, then fall back to the
    // best reply accepted in this window, or re-discover at once.
    for (const auto& [bad, when] : guard_.blacklist_entries()) {
        for (const RouteEntry& e : table_.valid_entries_via(bad)) {
            table_.invalidate(e.dest);
            ctx_.counters().invalidations++;
            ctx_.trace().record(ctx_.now(), TraceEv::RERR, id_,
                                {{"dest", s(e.dest)}, {"n", "1"},
                                 {"reason", "blacklist"}, {"via", s(bad)}});
        }
    }
    if (valid_route(dest)) {
        flush_buffer(dest);
        return;
    }
    pending_.erase(dest);
    originate_discovery(dest);
}

// ----------------------------------------------------------------- RERR ---

void AodvNode::handle_rerr(const Rerr& rerr, NodeId from) {
    if (malicious_) return; // black holes never process or emit route errors

    Rerr onward;
    for (const auto& [dest, seq] : rerr.unreachable) {
        const RouteEntry* e = table_.find(dest);
        if (e && e->state == RouteState::Valid && e->next_hop == from && e->dest_seq <= seq) {
            table_.invalidate(dest);
            ctx_.counters().invalidations++;
            onward.unreachable.emplace_back(dest, seq);
        }
    }
    if (onward.unreachable.empty()) return;
    ctx_.trace().record(ctx_.now(), TraceEv::RERR, id_,
                        {{"from", s(from)},
                         {"n", s(onward.unreachable.size())},
                         {"reason", "recv"}});
    if (!ctx_.node_alive(id_)) return;
    ctx_.broadcast(id_, onward, rerr_bytes(onward));
}

void AodvNode::on_link_break(NodeId next_hop) {
    auto broken = table_.valid_entries_via(next_hop);
    if (broken.empty()) return;
    Rerr rerr;
    for (const RouteEntry& e : broken) {
        table_.invalidate(e.dest);
        ctx_.counters().invalidations++;
        rerr.unreachable.emplace_back(e.dest, e.dest_seq);
    }
    ctx_.trace().record(ctx_.now(), TraceEv::RERR, id_,
                        {{"n", s(rerr.unreachable.size())},
                         {"reason", "link_break"},
                         {"via", s(next_hop)}});
    if (!ctx_.node_alive(id_)) return;
    ctx_.broadcast(id_, rerr, rerr_bytes(rerr));
}

// ----------------------------------------------------------------- data ---

void AodvNode::handle_data(const DataPacket& pkt, NodeId from) {
    (void)from;
    if (pkt.dst == id_) {
        ctx_.counters().flows[pkt.flow].received++;
        ctx_.trace().record(ctx_.now(), TraceEv::RECV, id_,
                            {{"flow", s(pkt.flow)},
                             {"latency", s((ctx_.now() - pkt.created_at).us)},
                             {"pseq", s(pkt.packet_seq)},
                             {"size", s(pkt.size_bytes)}});
        return;
    }
    if (malicious_) {
        // Silent absorption: no forwarding, no error report.
        ctx_.counters().flows[pkt.flow].absorbed++;
        ctx_.trace().record(ctx_.now(), TraceEv::DROP, id_,
                            {{"dest", s(pkt.dst)},
                             {"flow", s(pkt.flow)},
                             {"kind", "data"},
                             {"pseq", s(pkt.packet_seq)},
                             {"reason", "blackhole_absorb"}});
        return;
    }
    forward_data(pkt);
}

void AodvNode::on_traffic_emit(const DataPacket& pkt) {
    ctx_.counters().flows[pkt.flow].emitted++;
    ctx_.trace().record(ctx_.now(), TraceEv::SEND, id_,
                        {{"dest", s(pkt.dst)},
                         {"flow", s(pkt.flow)},
                         {"kind", "data"},
                         {"pseq", s(pkt.packet_seq)},
                         {"size", s(pkt.size_bytes)}});
    forward_data(pkt);
}

void AodvNode::forward_data(const DataPacket& pkt) {
    const RouteEntry* route = valid_route(pkt.dst);
    if (route) {
        if (!ctx_.node_alive(id_)) {
            ctx_.counters().flows[pkt.flow].energy++;
            ctx_.trace().record(ctx_.now(), TraceEv::DROP, id_,
                                {{"dest", s(pkt.dst)},
                                 {"flow", s(pkt.flow)},
                                 {"kind", "data"},
                                 {"pseq", s(pkt.packet_seq)},
                                 {"reason", "energy_exhausted"}});
            return;
        }
        NodeId hop = route->next_hop;
        if (!ctx_.in_range(id_, hop)) {
            // Link-break detection happens at transmission time (no HELLOs).
            on_link_break(hop);
            ctx_.counters().flows[pkt.flow].link_break++;
            ctx_.trace().record(ctx_.now(), TraceEv::DROP, id_,
                                {{"dest", s(pkt.dst)},
                                 {"flow", s(pkt.flow)},
                                 {"kind", "data"},
                                 {"pseq", s(pkt.packet_seq)},
                                 {"reason", "link_break"}});
            return;
        }
        table_.refresh(pkt.dst, ctx_.now() + ctx_.config().route_lifetime);
        ctx_.trace().record(ctx_.now(), TraceEv::FWD, id_,
                            {{"dest", s(pkt.dst)},
                             {"flow", s(pkt.flow)},
                             {"kind", "data"},
                             {"pseq", s(pkt.packet_seq)},
                             {"to", s(hop)}});
        ctx_.unicast(id_, hop, pkt, pkt.size_bytes);
        return;
    }

    buffer_packet(pkt);
    if (!pending_.count(pkt.dst)) originate_discovery(pkt.dst);
}

void AodvNode::buffer_packet(const DataPacket& pkt) {
    auto& q = buffer_[pkt.dst];
    auto same_flow = [&](const DataPacket& p) { return p.flow == pkt.flow; };
    auto in_flow = static_cast<std::uint32_t>(std::count_if(q.begin(), q.end(), same_flow));
    if (in_flow >= ctx_.config().buffer_cap) {
        auto oldest = std::find_if(q.begin(), q.end(), same_flow);
        ctx_.counters().flows[oldest->flow].no_route++;
        ctx_.trace().record(ctx_.now(), TraceEv::DROP, id_,
                            {{"dest", s(oldest->dst)},
                             {"flow", s(oldest->flow)},
                             {"kind", "data"},
                             {"pseq", s(oldest->packet_seq)},
                             {"reason", "no_route"}});
        q.erase(oldest);
    }
    q.push_back(pkt);
}

void AodvNode::flush_buffer(NodeId dest) {
    auto it = buffer_.find(dest);
    if (it == buffer_.end()) return;
    auto& q = it->second;
    while (!q.empty() && valid_route(dest)) {
        DataPacket pkt = q.front();
        q.pop_front();
        forward_data(pkt);
    }
    if (q.empty()) buffer_.erase(it);
}

// ------------------------------------------------------------- discovery --

void AodvNode::originate_discovery(NodeId dest) {
    if (dest == id_) throw SimInvariantError("self discovery");
    if (valid_route(dest)) return;
    if (!ctx_.node_alive(id_)) {
        ctx_.trace().record(ctx_.now(), TraceEv::DROP, id_,
                            {{"kind", "rreq"}, {"reason", "energy_exhausted"}});
        return;
    }

    bump_own_seq();
    ++rreq_id_;

    std::optional<SeqNo> last_known;
    if (const RouteEntry* e = table_.find(dest)) last_known = e->dest_seq;

    Rreq rreq;
    rreq.origin = id_;
    rreq.origin_seq = own_seq_;
    rreq.rreq_id = rreq_id_;
    rreq.dest = dest;
    rreq.last_known_dest_seq = last_known;
    rreq.hop_count = 0;

    rreq_seen_[{id_, rreq_id_}] = ctx_.now() + ctx_.config().dedup_expiry;
    pending_[dest] = PendingDiscovery{rreq_id_, ctx_.now() + ctx_.config().rrep_wait};
    ctx_.arm_rrep_window(id_, dest, rreq_id_, ctx_.config().rrep_wait);
    if (ctx_.detection_enabled())
        guard_.record_rreq(dest, rreq_id_, ctx_.now(), ctx_.config().rrep_wait, last_known);

    ctx_.trace().record(ctx_.now(), TraceEv::SEND, id_,
                        {{"dest", s(dest)},
                         {"hops", "0"},
                         {"kind", "rreq"},
                         {"origin", s(id_)},
                         {"oseq", s(own_seq_)},
                         {"rreq", s(rreq_id_)}});
    ctx_.broadcast(id_, rreq, kRreqBytes);
}

void AodvNode::on_rrep_window_closed(NodeId dest, std::uint32_t rreq_id) {
    auto it = pending_.find(dest);
    if (it != pending_.end() && it->second.rreq_id == rreq_id) pending_.erase(it);
    // Unserved buffered traffic re-discovers on the next emission.
}

} // namespace manet
