#include "manet/metrics.hpp"

#include "manet/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace manet {

std::string format_joules(std::uint64_t uj) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%llu.%06llu", static_cast<unsigned long long>(uj / 1'000'000),
                  static_cast<unsigned long long>(uj % 1'000'000));
    return buf;
}

std::vector<ThroughputPoint> bucketed_throughput(const std::vector<TraceRecord>& records,
                                                 Duration bucket) {
    if (bucket.us == 0) throw ValidationError("bucket", "must be > 0");
    SimTime sim_end{0};
    for (const auto& r : records) sim_end = std::max(sim_end, r.t);

    std::vector<ThroughputPoint> series;
    for (SimTime t{bucket.us}; t < sim_end; t.us += bucket.us)
        series.push_back({t, 0, 0, 0, 0, 0});
    series.push_back({sim_end, 0, 0, 0, 0, 0});

    auto bucket_of = [&](SimTime t) -> std::size_t {
        // Buckets are (prev_end, end]; t=0 events land in the first bucket.
        if (t.us == 0) return 0;
        std::size_t i = (t.us - 1) / bucket.us;
        return std::min(i, series.size() - 1);
    };

    // Cumulative energy needs the last snapshot per node at each boundary.
    std::map<NodeId, std::uint64_t> last_spent;
    std::vector<std::map<NodeId, std::uint64_t>> spent_at(series.size());
    std::vector<std::uint64_t> detects_at(series.size(), 0);

    for (const auto& r : records) {
        std::size_t b = bucket_of(r.t);
        switch (r.ev) {
            case TraceEv::RECV: {
                series[b].received_pkts++;
                series[b].received_bps += static_cast<double>(r.get_u64("size")) * 8.0;
                break;
            }
            case TraceEv::DETECT: detects_at[b]++; break;
            case TraceEv::ENERGY:
                if (!r.has("event")) spent_at[b][r.node] = r.get_u64("spent");
                break;
            default: break;
        }
    }

    std::uint64_t cum = 0, det = 0;
    double bucket_seconds = bucket.seconds();
    for (std::size_t i = 0; i < series.size(); ++i) {
        // Final bucket may be shorter when sim_end is not a bucket multiple.
        double width = bucket_seconds;
        if (i + 1 == series.size()) {
            std::uint64_t prev = i == 0 ? 0 : series[i - 1].bucket_end.us;
            width = static_cast<double>(series[i].bucket_end.us - prev) / 1e6;
            if (width <= 0) width = bucket_seconds;
        }
        cum += series[i].received_pkts;
        det += detects_at[i];
        series[i].cum_received = cum;
        series[i].detects_cum = det;
        series[i].received_bps /= width;
        for (const auto& [node, spent] : spent_at[i]) last_spent[node] = spent;
        std::uint64_t total = 0;
        for (const auto& [node, spent] : last_spent) total += spent;
        series[i].energy_spent_uj = total;
    }
    return series;
}

PhaseReport phase_report(const std::vector<TraceRecord>& records, Phase phase, Duration bucket) {
    PhaseReport rep;
    rep.phase = phase;
    std::map<NodeId, std::uint64_t> final_spent;

    for (const auto& r : records) {
        switch (r.ev) {
            case TraceEv::SEND:
                if (r.get("kind") == "data") rep.flows[r.get_u64("flow")].sent++;
                break;
            case TraceEv::RECV: rep.flows[r.get_u64("flow")].received++; break;
            case TraceEv::DROP: {
                if (!r.has("kind") || r.get("kind") != "data") break;
                FlowTally& f = rep.flows[r.get_u64("flow")];
                const std::string& reason = r.get("reason");
                if (reason == "blackhole_absorb") f.absorbed++;
                else if (reason == "no_route") f.no_route++;
                else if (reason == "link_break") f.link_break++;
                else if (reason == "energy_exhausted") f.energy++;
                break;
            }
            case TraceEv::DETECT: rep.detects++; break;
            case TraceEv::ENERGY:
                if (!r.has("event")) final_spent[r.node] = r.get_u64("spent");
                break;
            default: break;
        }
    }

    for (auto& [flow, f] : rep.flows) {
        std::uint64_t accounted = f.received + f.absorbed + f.no_route + f.link_break + f.energy;
        if (accounted > f.sent)
            throw ConservationViolation("flow " + std::to_string(flow) +
                                        ": more packets accounted than sent");
        f.in_flight = f.sent - accounted;
        rep.sent += f.sent;
        rep.received += f.received;
        rep.absorbed += f.absorbed;
        rep.no_route_drops += f.no_route;
        rep.link_break_drops += f.link_break;
        rep.energy_drops += f.energy;
        rep.in_flight += f.in_flight;
    }
    for (const auto& [node, spent] : final_spent) rep.energy_total_uj += spent;
    rep.series = bucketed_throughput(records, bucket);
    return rep;
}

void write_metrics_csv(std::ostream& out, const std::vector<ThroughputPoint>& series) {
    out << "bucket_end_us,received_pkts,received_bps,cum_received,energy_spent_j,detects\n";
    char bps[40];
    for (const auto& p : series) {
        std::snprintf(bps, sizeof bps, "%.6f", p.received_bps);
        out << p.bucket_end.us << ',' << p.received_pkts << ',' << bps << ',' << p.cum_received
            << ',' << format_joules(p.energy_spent_uj) << ',' << p.detects_cum << '\n';
    }
}

void write_metrics_csv_file(const std::string& path, const std::vector<ThroughputPoint>& series) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open metrics csv: " + path);
    write_metrics_csv(out, series);
    if (!out) throw IoError("metrics csv write failed: " + path);
}

} // namespace manet
