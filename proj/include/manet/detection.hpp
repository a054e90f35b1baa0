#pragma once

#include "manet/messages.hpp"
#include "manet/sim_time.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>

namespace manet {

// Per-discovery timestamp register: bounds the window in which route replies
// for that discovery are screened.
struct TimeKeeperRecord {
    NodeId origin = 0;
    NodeId dest = 0;
    std::uint32_t rreq_id = 0;
    SimTime sent_at;
    Duration window;
    std::optional<SeqNo> last_known_dest_seq;

    bool live(SimTime now) const { return now <= sent_at + window; }
};

enum class ScreenMode : std::uint8_t {
    Raw,         // gate on the reply's sequence number itself
    AdaptiveRate // gate on (seq - last known) per second of elapsed window time
};

struct DetectionConfig {
    SeqNo threshold = 1000;
    ScreenMode mode = ScreenMode::Raw;
    double rate_threshold = 1000.0; // seq-units per second, AdaptiveRate only
};

enum class Verdict : std::uint8_t { Accept, Malicious, Stale };

// Screen value for an in-window reply. Raw mode: the sequence number.
// Adaptive-rate mode: (seq - last known) / elapsed seconds, elapsed floored
// at one tick.
double adaptive_seq(const Rrep& rrep, const TimeKeeperRecord& record, SimTime now,
                    ScreenMode mode);

// Pure verdict function: Malicious iff the screen value strictly exceeds the
// threshold inside the window; Stale once the window has expired.
Verdict screen_value_verdict(const Rrep& rrep, const TimeKeeperRecord& record, SimTime now,
                             const DetectionConfig& cfg);

// One source's detection state: the time-keeper registers for its own
// discoveries plus its permanent blacklist.
class DetectionGuard {
public:
    explicit DetectionGuard(NodeId owner) : owner_(owner) {}

    // Registers a discovery; duplicates for the same (dest, rreq_id) are a bug.
    const TimeKeeperRecord& record_rreq(NodeId dest, std::uint32_t rreq_id, SimTime sent_at,
                                        Duration window, std::optional<SeqNo> last_known);

    // Most recent record for a destination, if any discovery was registered.
    const TimeKeeperRecord* latest_record(NodeId dest) const;

    void blacklist(NodeId node, SimTime detected_at);
    bool is_blacklisted(NodeId node) const { return blacklist_.count(node) > 0; }
    const std::map<NodeId, SimTime>& blacklist_entries() const { return blacklist_; }

    NodeId owner() const { return owner_; }

private:
    NodeId owner_;
    // Keyed by (dest, rreq_id); rreq_id increases per discovery, so the
    // largest key per dest is the latest register.
    std::map<std::pair<NodeId, std::uint32_t>, TimeKeeperRecord> records_;
    std::map<NodeId, SimTime> blacklist_; // never shrinks during a run
};

} // namespace manet
