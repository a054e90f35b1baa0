#include "manet/detection.hpp"

#include "manet/errors.hpp"

namespace manet {

double adaptive_seq(const Rrep& rrep, const TimeKeeperRecord& record, SimTime now,
                    ScreenMode mode) {
    if (!record.live(now)) throw SimInvariantError("adaptive_seq outside reply window");
    if (mode == ScreenMode::Raw) return static_cast<double>(rrep.dest_seq);
    std::uint64_t elapsed = (now - record.sent_at).us;
    if (elapsed == 0) elapsed = 1;
    double delta = static_cast<double>(rrep.dest_seq) -
                   static_cast<double>(record.last_known_dest_seq.value_or(0));
    return delta / (static_cast<double>(elapsed) / 1e6);
}

Verdict screen_value_verdict(const Rrep& rrep, const TimeKeeperRecord& record, SimTime now,
                             const DetectionConfig& cfg) {
    if (!record.live(now)) return Verdict::Stale;
    double value = adaptive_seq(rrep, record, now, cfg.mode);
    double gate = cfg.mode == ScreenMode::Raw ? static_cast<double>(cfg.threshold)
                                              : cfg.rate_threshold;
    // Strict inequality: a reply equal to the threshold is a normal path.
    return value > gate ? Verdict::Malicious : Verdict::Accept;
}

const TimeKeeperRecord& DetectionGuard::record_rreq(NodeId dest, std::uint32_t rreq_id,
                                                    SimTime sent_at, Duration window,
                                                    std::optional<SeqNo> last_known) {
    auto key = std::make_pair(dest, rreq_id);
    if (records_.count(key))
        throw SimInvariantError("duplicate time-keeper record for discovery");
    TimeKeeperRecord rec;
    rec.origin = owner_;
    rec.dest = dest;
    rec.rreq_id = rreq_id;
    rec.sent_at = sent_at;
    rec.window = window;
    rec.last_known_dest_seq = last_known;
    return records_.emplace(key, rec).first->second;
}

const TimeKeeperRecord* DetectionGuard::latest_record(NodeId dest) const {
    // Largest rreq_id for this dest: the element just before the next dest's range.
    auto it = records_.lower_bound({dest + 1, 0});
    if (it == records_.begin()) return nullptr;
    --it;
    if (it->first.first != dest) return nullptr;
    return &it->second;
}

void DetectionGuard::blacklist(NodeId node, SimTime detected_at) {
    blacklist_.emplace(node, detected_at); // first detection time wins; entries never leave
}

} // namespace manet
