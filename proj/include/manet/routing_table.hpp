#pragma once

#include "manet/messages.hpp"
#include "manet/sim_time.hpp"

#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace manet {

enum class RouteState : std::uint8_t { Valid, Invalid };

struct RouteEntry {
    NodeId dest = 0;
    NodeId next_hop = 0;
    std::uint32_t hop_count = 0;
    SeqNo dest_seq = 0;
    SimTime expires_at;
    RouteState state = RouteState::Valid;
};

// Per-node AODV routing table. The freshness rule lives in update():
// greater dest_seq wins; on a tie the smaller hop count wins; an earlier
// arrival beats an equal later one. Invalid or absent entries always yield.
class RoutingTable {
public:
    // Returns true when the candidate replaced/installed the entry.
    // A Valid entry's dest_seq never decreases (asserted).
    bool update(const RouteEntry& candidate);

    // Valid and unexpired. Expired entries are invalidated lazily via the
    // on_expire hook so the owner can emit the matching trace line.
    const RouteEntry* valid_route(NodeId dest, SimTime now,
                                  const std::function<void(const RouteEntry&)>& on_expire = {});

    const RouteEntry* find(NodeId dest) const;
    void invalidate(NodeId dest);
    void refresh(NodeId dest, SimTime expires_at);

    // All Valid entries whose next_hop matches (link break / blacklist purge).
    std::vector<RouteEntry> valid_entries_via(NodeId next_hop) const;

    const std::map<NodeId, RouteEntry>& entries() const { return entries_; }

private:
    std::map<NodeId, RouteEntry> entries_;
};

} // namespace manet
