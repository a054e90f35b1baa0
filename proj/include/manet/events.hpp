#pragma once

#include "manet/errors.hpp"
#include "manet/messages.hpp"
#include "manet/sim_time.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <variant>

namespace manet {

struct FrameDelivery {
    NodeId to = 0;
    Frame frame;
};

enum class TimerKind : std::uint8_t { RrepWindow };

struct TimerExpiry {
    NodeId node = 0;
    TimerKind kind = TimerKind::RrepWindow;
    NodeId dest = 0;
    std::uint32_t rreq_id = 0;
};

struct TrafficEmit {
    FlowId flow = 0;
    std::uint64_t packet_seq = 0;
};

struct WaypointArrival {
    NodeId node = 0;
};

// Fires at throughput-bucket boundaries; drives the per-bucket energy snapshot.
struct PhaseMarker {
    std::uint64_t bucket_index = 0;
    SimTime bucket_end;
};

// Used by the adversary when reply_delay > 0: a send deferred to a later tick.
struct DeferredUnicast {
    NodeId from = 0;
    NodeId to = 0;
    Frame frame;
};

using EventPayload =
    std::variant<FrameDelivery, TimerExpiry, TrafficEmit, WaypointArrival, PhaseMarker, DeferredUnicast>;

struct Event {
    SimTime fire_at;
    EventPayload payload;
};

using EventHandle = std::uint64_t;

// Deterministic event queue: total order (fire_at, insertion seq).
class EventQueue {
public:
    EventHandle schedule(Event ev) {
        if (ev.fire_at < now_) throw SchedulingInPast("schedule: fire_at before now()");
        EventHandle h = next_seq_++;
        queue_.emplace(Key{ev.fire_at, h}, std::move(ev.payload));
        return h;
    }

    // Timers may be cancelled; unknown/fired handles are ignored.
    void cancel(EventHandle h, SimTime fire_at) { queue_.erase(Key{fire_at, h}); }

    // Processes every event with fire_at <= limit in (fire_at, seq) order,
    // invoking sink on each. Clock ends at limit.
    std::uint64_t run_until(SimTime limit, const std::function<void(SimTime, EventPayload&)>& sink) {
        if (limit < now_) throw SchedulingInPast("run_until: limit before now()");
        std::uint64_t processed = 0;
        while (!queue_.empty() && queue_.begin()->first.at <= limit) {
            auto node = queue_.extract(queue_.begin());
            now_ = node.key().at;
            ++processed;
            sink(now_, node.mapped());
        }
        now_ = limit;
        return processed;
    }

    SimTime now() const { return now_; }
    bool empty() const { return queue_.empty(); }
    std::size_t pending() const { return queue_.size(); }

    // Inspection hook for end-of-run conservation audits.
    template <typename F>
    void for_each_pending(F&& f) const {
        for (const auto& [key, payload] : queue_) f(key.at, payload);
    }

private:
    struct Key {
        SimTime at;
        EventHandle seq;
        auto operator<=>(const Key&) const = default;
    };

    SimTime now_;
    EventHandle next_seq_ = 0;
    std::map<Key, EventPayload> queue_;
};

} // namespace manet
