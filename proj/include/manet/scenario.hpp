#pragma once

#include "manet/detection.hpp"
#include "manet/energy.hpp"
#include "manet/messages.hpp"
#include "manet/mobility.hpp"
#include "manet/sim_time.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace manet {

struct CbrFlow {
    FlowId flow = 0;
    NodeId src = 0;
    NodeId dst = 0;
    double rate_pps = 4.0;
    std::uint32_t size_bytes = 512;
    SimTime start_at;
    SimTime stop_at;
};

struct AdversaryConfig {
    std::vector<NodeId> nodes;       // sorted, unique
    SeqNo forged_seq = 1'000'000;
    Duration reply_delay;            // 0: wins arrival-order tie-breaks
};

struct Scenario {
    std::uint32_t node_count = 25;
    double terrain_w = 1286.0;
    double terrain_h = 850.0;
    double range_m = 250.0;
    SimTime sim_time = SimTime::from_seconds(20.0);
    std::uint64_t seed = 1;
    Duration hop_delay = Duration::from_ms(1.0);
    Duration rrep_wait = Duration::from_seconds(1.0);
    Duration route_lifetime = Duration::from_seconds(10.0);
    Duration dedup_expiry = Duration::from_seconds(3.0);
    std::uint32_t buffer_cap = 64; // per flow
    Duration bucket = Duration::from_seconds(0.5);

    MobilityParams mobility;
    std::map<NodeId, Position> fixed_positions;
    std::vector<CbrFlow> flows;
    AdversaryConfig adversary;
    DetectionConfig detection;
    EnergyCosts energy;
};

enum class Phase : std::uint8_t { Baseline, Attack, Defend };

std::string_view to_string(Phase p);
Phase phase_from_string(std::string_view s);

// Parses the flat key=value scenario format (see scenarios/SCHEMA.md).
// Unknown keys are rejected; all omitted keys take the defaults above.
// Throws ParseError (line/column) or ValidationError (field + constraint).
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text, const std::string& origin = "<string>");

// Cross-field checks; load_scenario/parse_scenario run this automatically.
void validate_scenario(const Scenario& s);

} // namespace manet
