#pragma once

// Scriptable SimContext for handler-level tests: frames are captured instead
// of delivered, the clock and range relation are set by hand.

#include "manet/node.hpp"
#include "manet/scenario.hpp"
#include "manet/trace.hpp"

#include <set>
#include <utility>
#include <vector>

namespace manet::testing {

class FakeCtx final : public SimContext {
public:
    explicit FakeCtx(Scenario scn = {}, bool detection = false, bool adversary = true)
        : scn_(std::move(scn)), detection_(detection), adversary_(adversary) {}

    // --- scripting surface ---
    SimTime clock;
    std::vector<std::pair<NodeId, FrameBody>> broadcasts;        // (from, body)
    std::vector<std::tuple<NodeId, NodeId, FrameBody>> unicasts; // (from, to, body)
    std::vector<std::tuple<NodeId, NodeId, Rrep, Duration>> deferred;
    std::set<std::pair<NodeId, NodeId>> out_of_range; // unordered pair
    std::set<NodeId> dead;
    std::uint64_t windows_armed = 0;
    std::uint64_t screen_debits = 0;

    void set_out_of_range(NodeId a, NodeId b) {
        out_of_range.insert({a, b});
        out_of_range.insert({b, a});
    }

    // --- SimContext ---
    SimTime now() const override { return clock; }
    const Scenario& config() const override { return scn_; }
    bool adversary_enabled() const override { return adversary_; }
    bool detection_enabled() const override { return detection_; }
    bool node_alive(NodeId n) const override { return !dead.count(n); }
    bool in_range(NodeId a, NodeId b) const override { return !out_of_range.count({a, b}); }

    std::vector<NodeId> broadcast(NodeId from, FrameBody body, std::uint32_t) override {
        broadcasts.emplace_back(from, std::move(body));
        return {};
    }
    bool unicast(NodeId from, NodeId to, FrameBody body, std::uint32_t) override {
        if (!in_range(from, to)) return false;
        unicasts.emplace_back(from, to, std::move(body));
        return true;
    }
    void defer_rrep(NodeId from, NodeId to, const Rrep& rrep, Duration delay) override {
        deferred.emplace_back(from, to, rrep, delay);
    }
    void arm_rrep_window(NodeId, NodeId, std::uint32_t, Duration) override { ++windows_armed; }
    void debit_screen(NodeId) override { ++screen_debits; }
    TraceWriter& trace() override { return trace_; }
    Counters& counters() override { return counters_; }

    const std::string& trace_text() const { return trace_.str(); }
    Counters counters_;

private:
    Scenario scn_;
    bool detection_;
    bool adversary_;
    StringTraceWriter trace_;
};

} // namespace manet::testing
