#include "manet/scenario.hpp"

#include "manet/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace manet {

std::string_view to_string(Phase p) {
    switch (p) {
        case Phase::Baseline: return "baseline";
        case Phase::Attack: return "attack";
        case Phase::Defend: return "defend";
    }
    return "?";
}

Phase phase_from_string(std::string_view s) {
    if (s == "baseline") return Phase::Baseline;
    if (s == "attack") return Phase::Attack;
    if (s == "defend") return Phase::Defend;
    throw ValidationError("phase", "must be baseline|attack|defend, got '" + std::string(s) + "'");
}

namespace {

struct KeyVal {
    std::string key;
    std::string value;
    int line;
    int col; // of the value
};

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

double parse_double(const KeyVal& kv) {
    try {
        std::size_t used = 0;
        double v = std::stod(kv.value, &used);
        if (used != kv.value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected a number for " + kv.key + ", got '" + kv.value + "'", kv.line,
                         kv.col);
    }
}

std::uint64_t parse_u64(const KeyVal& kv) {
    try {
        std::size_t used = 0;
        if (!kv.value.empty() && kv.value[0] == '-') throw std::invalid_argument("neg");
        std::uint64_t v = std::stoull(kv.value, &used);
        if (used != kv.value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected a non-negative integer for " + kv.key + ", got '" + kv.value +
                             "'",
                         kv.line, kv.col);
    }
}

bool parse_bool(const KeyVal& kv) {
    if (kv.value == "true" || kv.value == "1") return true;
    if (kv.value == "false" || kv.value == "0") return false;
    throw ParseError("expected true/false for " + kv.key, kv.line, kv.col);
}

std::vector<NodeId> parse_id_list(const KeyVal& kv) {
    std::vector<NodeId> out;
    std::stringstream ss(kv.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(static_cast<NodeId>(std::stoul(item)));
        } catch (const std::exception&) {
            throw ParseError("bad node id '" + item + "' in " + kv.key, kv.line, kv.col);
        }
    }
    return out;
}

// "flow.<i>.<field>" / "node.<i>.<field>" splitter
bool split_indexed(const std::string& key, const std::string& prefix, std::uint32_t& index,
                   std::string& field) {
    if (key.rfind(prefix + ".", 0) != 0) return false;
    auto rest = key.substr(prefix.size() + 1);
    auto dot = rest.find('.');
    if (dot == std::string::npos) return false;
    try {
        index = static_cast<std::uint32_t>(std::stoul(rest.substr(0, dot)));
    } catch (const std::exception&) {
        return false;
    }
    field = rest.substr(dot + 1);
    return true;
}

} // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
    std::vector<KeyVal> pairs;
    {
        std::istringstream in(text);
        std::string raw;
        int lineno = 0;
        while (std::getline(in, raw)) {
            ++lineno;
            auto hash = raw.find('#');
            std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
            if (line.empty()) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ParseError("expected key = value", lineno,
                                 static_cast<int>(raw.find_first_not_of(" \t")) + 1);
            KeyVal kv;
            kv.key = trim(line.substr(0, eq));
            kv.value = trim(line.substr(eq + 1));
            kv.line = lineno;
            kv.col = static_cast<int>(raw.find('=')) + 2;
            if (kv.key.empty()) throw ParseError("empty key", lineno, 1);
            if (kv.value.empty()) throw ParseError("empty value for " + kv.key, lineno, kv.col);
            pairs.push_back(std::move(kv));
        }
    }
    if (pairs.empty()) throw ParseError("empty scenario: " + origin, 1, 1);

    Scenario s;
    std::map<std::uint32_t, CbrFlow> flows;
    std::set<std::string> seen;

    for (const auto& kv : pairs) {
        if (!seen.insert(kv.key).second)
            throw ParseError("duplicate key " + kv.key, kv.line, 1);

        std::uint32_t idx = 0;
        std::string field;
        if (split_indexed(kv.key, "flow", idx, field)) {
            CbrFlow& f = flows[idx];
            f.flow = idx;
            if (field == "src") f.src = static_cast<NodeId>(parse_u64(kv));
            else if (field == "dst") f.dst = static_cast<NodeId>(parse_u64(kv));
            else if (field == "rate_pps") f.rate_pps = parse_double(kv);
            else if (field == "size_bytes") f.size_bytes = static_cast<std::uint32_t>(parse_u64(kv));
            else if (field == "start_s") f.start_at = SimTime::from_seconds(parse_double(kv));
            else if (field == "stop_s") f.stop_at = SimTime::from_seconds(parse_double(kv));
            else throw ParseError("unknown flow key " + kv.key, kv.line, 1);
            continue;
        }
        if (split_indexed(kv.key, "node", idx, field)) {
            Position& p = s.fixed_positions[static_cast<NodeId>(idx)];
            if (field == "x_m") p.x = parse_double(kv);
            else if (field == "y_m") p.y = parse_double(kv);
            else throw ParseError("unknown node key " + kv.key, kv.line, 1);
            continue;
        }

        if (kv.key == "node_count") s.node_count = static_cast<std::uint32_t>(parse_u64(kv));
        else if (kv.key == "terrain.width_m") s.terrain_w = parse_double(kv);
        else if (kv.key == "terrain.height_m") s.terrain_h = parse_double(kv);
        else if (kv.key == "range_m") s.range_m = parse_double(kv);
        else if (kv.key == "sim_time_s") s.sim_time = SimTime::from_seconds(parse_double(kv));
        else if (kv.key == "seed") s.seed = parse_u64(kv);
        else if (kv.key == "hop_delay_ms") s.hop_delay = Duration::from_ms(parse_double(kv));
        else if (kv.key == "rrep_wait_s") s.rrep_wait = Duration::from_seconds(parse_double(kv));
        else if (kv.key == "route_lifetime_s")
            s.route_lifetime = Duration::from_seconds(parse_double(kv));
        else if (kv.key == "dedup_expiry_s")
            s.dedup_expiry = Duration::from_seconds(parse_double(kv));
        else if (kv.key == "buffer_cap") s.buffer_cap = static_cast<std::uint32_t>(parse_u64(kv));
        else if (kv.key == "bucket_s") s.bucket = Duration::from_seconds(parse_double(kv));
        else if (kv.key == "mobility.enabled") s.mobility.enabled = parse_bool(kv);
        else if (kv.key == "mobility.v_min_mps") s.mobility.v_min = parse_double(kv);
        else if (kv.key == "mobility.v_max_mps") s.mobility.v_max = parse_double(kv);
        else if (kv.key == "mobility.pause_s")
            s.mobility.pause = Duration::from_seconds(parse_double(kv));
        else if (kv.key == "adversary.nodes") s.adversary.nodes = parse_id_list(kv);
        else if (kv.key == "adversary.forged_seq")
            s.adversary.forged_seq = static_cast<SeqNo>(parse_u64(kv));
        else if (kv.key == "adversary.reply_delay_ms")
            s.adversary.reply_delay = Duration::from_ms(parse_double(kv));
        else if (kv.key == "detection.threshold")
            s.detection.threshold = static_cast<SeqNo>(parse_u64(kv));
        else if (kv.key == "detection.mode") {
            if (kv.value == "raw") s.detection.mode = ScreenMode::Raw;
            else if (kv.value == "adaptive-rate") s.detection.mode = ScreenMode::AdaptiveRate;
            else throw ParseError("detection.mode must be raw|adaptive-rate", kv.line, kv.col);
        } else if (kv.key == "detection.rate_threshold")
            s.detection.rate_threshold = parse_double(kv);
        else if (kv.key == "energy.initial_j")
            s.energy.initial_uj = static_cast<std::uint64_t>(parse_double(kv) * 1e6 + 0.5);
        else if (kv.key == "energy.cost_tx_j")
            s.energy.tx_uj = static_cast<std::uint64_t>(parse_double(kv) * 1e6 + 0.5);
        else if (kv.key == "energy.cost_rx_j")
            s.energy.rx_uj = static_cast<std::uint64_t>(parse_double(kv) * 1e6 + 0.5);
        else if (kv.key == "energy.cost_screen_j")
            s.energy.screen_uj = static_cast<std::uint64_t>(parse_double(kv) * 1e6 + 0.5);
        else throw ParseError("unknown key " + kv.key, kv.line, 1);
    }

    for (auto& [idx, f] : flows) s.flows.push_back(f);
    std::sort(s.flows.begin(), s.flows.end(),
              [](const CbrFlow& a, const CbrFlow& b) { return a.flow < b.flow; });

    std::sort(s.adversary.nodes.begin(), s.adversary.nodes.end());
    s.adversary.nodes.erase(std::unique(s.adversary.nodes.begin(), s.adversary.nodes.end()),
                            s.adversary.nodes.end());

    validate_scenario(s);
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scenario: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

void validate_scenario(const Scenario& s) {
    if (s.node_count == 0) throw ValidationError("node_count", "must be >= 1");
    if (s.terrain_w <= 0 || s.terrain_h <= 0)
        throw ValidationError("terrain", "width/height must be positive");
    if (s.range_m <= 0) throw ValidationError("range_m", "must be positive");
    if (s.sim_time.us == 0) throw ValidationError("sim_time_s", "must be positive");
    if (s.bucket.us == 0) throw ValidationError("bucket_s", "must be positive");
    if (s.buffer_cap == 0) throw ValidationError("buffer_cap", "must be >= 1");
    if (s.detection.threshold == 0) throw ValidationError("detection.threshold", "must be > 0");
    if (s.mobility.enabled) {
        if (s.mobility.v_min <= 0)
            throw ValidationError("mobility.v_min_mps", "must be > 0 when mobility is enabled");
        if (s.mobility.v_max < s.mobility.v_min)
            throw ValidationError("mobility.v_max_mps", "must be >= v_min");
    }
    for (const auto& [id, p] : s.fixed_positions) {
        if (id >= s.node_count)
            throw ValidationError("node." + std::to_string(id),
                                  "id must be < node_count (" + std::to_string(s.node_count) + ")");
        if (p.x < 0 || p.x > s.terrain_w || p.y < 0 || p.y > s.terrain_h)
            throw ValidationError("node." + std::to_string(id), "position outside terrain");
    }

    std::set<NodeId> endpoints;
    for (const auto& f : s.flows) {
        std::string name = "flow." + std::to_string(f.flow);
        if (f.src >= s.node_count) throw ValidationError(name + ".src", "must be < node_count");
        if (f.dst >= s.node_count) throw ValidationError(name + ".dst", "must be < node_count");
        if (f.src == f.dst) throw ValidationError(name, "src and dst must differ");
        if (f.rate_pps <= 0) throw ValidationError(name + ".rate_pps", "must be > 0");
        if (f.size_bytes == 0) throw ValidationError(name + ".size_bytes", "must be > 0");
        if (!(f.start_at < f.stop_at))
            throw ValidationError(name, "start_s must be < stop_s");
        if (f.stop_at > s.sim_time)
            throw ValidationError(name + ".stop_s", "must be <= sim_time_s");
        endpoints.insert(f.src);
        endpoints.insert(f.dst);
    }
    for (NodeId m : s.adversary.nodes) {
        if (m >= s.node_count)
            throw ValidationError("adversary.nodes", "id " + std::to_string(m) +
                                                         " must be < node_count");
        if (endpoints.count(m))
            throw ValidationError("adversary.nodes", "node " + std::to_string(m) +
                                                         " is a flow endpoint");
    }
}

} // namespace manet
