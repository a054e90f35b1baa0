#pragma once

#include "manet/sim_time.hpp"

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace manet {

using NodeId = std::uint32_t;
using FlowId = std::uint32_t;
using SeqNo = std::uint32_t; // destination sequence number, the value the whole protocol turns on

// Route request, flooded network-wide. Deduplicated by (origin, rreq_id).
struct Rreq {
    NodeId origin = 0;
    SeqNo origin_seq = 0;
    std::uint32_t rreq_id = 0;
    NodeId dest = 0;
    std::optional<SeqNo> last_known_dest_seq; // nullopt: origin has never heard of dest
    std::uint32_t hop_count = 0;              // +1 per rebroadcast
};

// Route reply, unicast back along the reverse path.
struct Rrep {
    NodeId dest = 0;
    SeqNo dest_seq = 0;
    NodeId origin = 0;
    std::uint32_t hop_count = 0; // hops from the current holder to dest; +1 per forward
    Duration lifetime;
    NodeId replier = 0; // who generated this reply (destination, caching intermediate, or forger)
};

// Route error: links broke, these destinations are unreachable via the sender.
struct Rerr {
    std::vector<std::pair<NodeId, SeqNo>> unreachable;
};

struct DataPacket {
    FlowId flow = 0;
    NodeId src = 0;
    NodeId dst = 0;
    std::uint64_t packet_seq = 0;
    std::uint32_t size_bytes = 0;
    SimTime created_at;
};

using FrameBody = std::variant<Rreq, Rrep, Rerr, DataPacket>;

struct Frame {
    NodeId sender = 0; // immediate transmitter, not the originator
    FrameBody body;
    std::uint32_t size_bytes = 0;
};

// Wire sizes, used for energy/trace bookkeeping only (per-event energy model).
inline constexpr std::uint32_t kRreqBytes = 24;
inline constexpr std::uint32_t kRrepBytes = 20;
inline std::uint32_t rerr_bytes(const Rerr& e) {
    return 4 + 8 * static_cast<std::uint32_t>(e.unreachable.size());
}

} // namespace manet
