#include "manet/routing_table.hpp"

#include "manet/errors.hpp"

namespace manet {

bool RoutingTable::update(const RouteEntry& candidate) {
    auto it = entries_.find(candidate.dest);
    if (it == entries_.end()) {
        entries_.emplace(candidate.dest, candidate);
        return true;
    }
    RouteEntry& cur = it->second;
    bool replace = cur.state == RouteState::Invalid || candidate.dest_seq > cur.dest_seq ||
                   (candidate.dest_seq == cur.dest_seq && candidate.hop_count < cur.hop_count);
    if (!replace) return false;
    // Freshness: a Valid entry is never replaced by a strictly smaller seq.
    if (cur.state == RouteState::Valid && candidate.dest_seq < cur.dest_seq)
        throw SimInvariantError("routing-table freshness violated");
    cur = candidate;
    return true;
}

const RouteEntry* RoutingTable::valid_route(NodeId dest, SimTime now,
                                            const std::function<void(const RouteEntry&)>& on_expire) {
    auto it = entries_.find(dest);
    if (it == entries_.end()) return nullptr;
    RouteEntry& e = it->second;
    if (e.state != RouteState::Valid) return nullptr;
    if (e.expires_at < now) {
        if (on_expire) on_expire(e);
        e.state = RouteState::Invalid;
        return nullptr;
    }
    return &e;
}

const RouteEntry* RoutingTable::find(NodeId dest) const {
    auto it = entries_.find(dest);
    return it == entries_.end() ? nullptr : &it->second;
}

void RoutingTable::invalidate(NodeId dest) {
    auto it = entries_.find(dest);
    if (it != entries_.end()) it->second.state = RouteState::Invalid;
}

void RoutingTable::refresh(NodeId dest, SimTime expires_at) {
    auto it = entries_.find(dest);
    if (it != entries_.end() && it->second.expires_at < expires_at)
        it->second.expires_at = expires_at;
}

std::vector<RouteEntry> RoutingTable::valid_entries_via(NodeId next_hop) const {
    std::vector<RouteEntry> out;
    for (const auto& [dest, e] : entries_)
        if (e.state == RouteState::Valid && e.next_hop == next_hop) out.push_back(e);
    return out;
}

} // namespace manet
