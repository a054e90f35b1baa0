#pragma once

#include "manet/messages.hpp"
#include "manet/rng.hpp"
#include "manet/sim_time.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace manet {

struct Position {
    double x = 0;
    double y = 0;
};

inline double distance_sq(Position a, Position b) {
    double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

// One straight-line segment of a random-waypoint trajectory. The node sits
// at `to` from arrive_at until the next leg departs (pause).
struct WaypointLeg {
    Position from;
    Position to;
    SimTime depart_at;
    SimTime arrive_at;
    double speed_mps = 0;
};

struct MobilityParams {
    bool enabled = true;
    double v_min = 1.0;
    double v_max = 20.0;
    Duration pause = Duration::from_seconds(2.0);
};

// Random-waypoint field over the terrain rectangle. Each node draws from its
// own labeled stream ("mobility.<id>"), so a trajectory is a pure function of
// (seed, node) and can be replayed leg by leg without the event loop.
class MobilityField {
public:
    MobilityField(std::uint32_t node_count, double terrain_w, double terrain_h, double range_m,
                  MobilityParams params, std::uint64_t seed,
                  const std::map<NodeId, Position>& fixed_positions);

    Position position_at(NodeId node, SimTime t) const;
    bool in_range(NodeId a, NodeId b, SimTime t) const; // inclusive boundary (<= range)

    // Draws the next leg for a node that has arrived; returns the new leg.
    // The caller schedules the WaypointArrival event at leg.arrive_at.
    const WaypointLeg& next_waypoint(NodeId node, SimTime now);

    bool enabled() const { return params_.enabled; }
    const WaypointLeg& current_leg(NodeId node) const { return legs_.at(node); }
    std::uint32_t node_count() const { return static_cast<std::uint32_t>(legs_.size()); }
    double range() const { return range_m_; }

    // Uniform draw helpers exposed for the oracle-style tests.
    Position draw_destination(NodeId node);
    double draw_speed(NodeId node);

    // Pins an exact leg; test scripting only.
    void script_leg(NodeId node, const WaypointLeg& leg) { legs_.at(node) = leg; }

private:
    void check_node(NodeId node) const;

    double terrain_w_;
    double terrain_h_;
    double range_m_;
    MobilityParams params_;
    std::vector<WaypointLeg> legs_;
    std::vector<DeterministicRng> streams_;
};

} // namespace manet
