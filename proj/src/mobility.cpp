#include "manet/mobility.hpp"

#include "manet/errors.hpp"

#include <cmath>

namespace manet {

MobilityField::MobilityField(std::uint32_t node_count, double terrain_w, double terrain_h,
                             double range_m, MobilityParams params, std::uint64_t seed,
                             const std::map<NodeId, Position>& fixed_positions)
    : terrain_w_(terrain_w), terrain_h_(terrain_h), range_m_(range_m), params_(params) {
    DeterministicRng placement = rng_stream("placement", seed);
    legs_.reserve(node_count);
    streams_.reserve(node_count);
    for (NodeId n = 0; n < node_count; ++n) {
        streams_.push_back(rng_stream("mobility." + std::to_string(n), seed));
        // Placement draws happen for every node in id order so that fixed
        // overrides don't shift other nodes' positions.
        Position p{placement.uniform_double(0, terrain_w_), placement.uniform_double(0, terrain_h_)};
        if (auto it = fixed_positions.find(n); it != fixed_positions.end()) p = it->second;
        WaypointLeg leg;
        leg.from = leg.to = p;
        leg.depart_at = leg.arrive_at = SimTime{0};
        legs_.push_back(leg);
    }
}

void MobilityField::check_node(NodeId node) const {
    if (node >= legs_.size()) throw SimInvariantError("unknown node " + std::to_string(node));
}

Position MobilityField::position_at(NodeId node, SimTime t) const {
    check_node(node);
    const WaypointLeg& leg = legs_[node];
    if (t <= leg.depart_at) return leg.from;
    if (t >= leg.arrive_at) return leg.to;
    double frac = static_cast<double>((t - leg.depart_at).us) /
                  static_cast<double>((leg.arrive_at - leg.depart_at).us);
    return Position{leg.from.x + (leg.to.x - leg.from.x) * frac,
                    leg.from.y + (leg.to.y - leg.from.y) * frac};
}

bool MobilityField::in_range(NodeId a, NodeId b, SimTime t) const {
    return distance_sq(position_at(a, t), position_at(b, t)) <= range_m_ * range_m_;
}

Position MobilityField::draw_destination(NodeId node) {
    check_node(node);
    double x = streams_[node].uniform_double(0, terrain_w_);
    double y = streams_[node].uniform_double(0, terrain_h_);
    return Position{x, y};
}

double MobilityField::draw_speed(NodeId node) {
    check_node(node);
    return streams_[node].uniform_double(params_.v_min, params_.v_max);
}

const WaypointLeg& MobilityField::next_waypoint(NodeId node, SimTime now) {
    check_node(node);
    WaypointLeg& leg = legs_[node];
    Position start = leg.to;
    Position dest = draw_destination(node);
    double speed = draw_speed(node);

    WaypointLeg next;
    next.from = start;
    next.to = dest;
    next.speed_mps = speed;
    next.depart_at = now + params_.pause;
    double dist = std::sqrt(distance_sq(start, dest));
    auto travel = Duration{static_cast<std::uint64_t>(dist / speed * 1e6 + 0.5)};
    next.arrive_at = next.depart_at + travel;
    // Zero-length hop with zero pause would re-fire at the same tick forever.
    if (next.arrive_at <= now) next.arrive_at = SimTime{now.us + 1};
    leg = next;
    return leg;
}

} // namespace manet
