#include "manet/trace.hpp"

#include "manet/errors.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace manet {

namespace {

constexpr std::array<std::string_view, 8> kEvNames = {"SEND", "RECV", "FWD",  "DROP",
                                                      "RERR", "DETECT", "MOVE", "ENERGY"};

std::uint64_t fnv1a_update(std::uint64_t h, std::string_view bytes) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

std::string_view to_string(TraceEv ev) { return kEvNames[static_cast<std::size_t>(ev)]; }

void TraceWriter::record(SimTime t, TraceEv ev, NodeId node,
                         std::initializer_list<std::pair<std::string_view, std::string>> kv) {
    std::string line;
    line.reserve(64);
    line += "t=";
    line += std::to_string(t.us);
    line += " ev=";
    line += to_string(ev);
    line += " node=";
    line += std::to_string(node);

    // Keys after the fixed prefix are emitted in alphabetical order.
    std::vector<std::pair<std::string_view, const std::string*>> sorted;
    sorted.reserve(kv.size());
    for (const auto& p : kv) sorted.emplace_back(p.first, &p.second);
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [k, v] : sorted) {
        line += ' ';
        line += k;
        line += '=';
        line += *v;
    }
    line += '\n';

    hash_ = fnv1a_update(hash_, line);
    ++lines_;
    write(line);
}

void TraceWriter::finish() {
    if (finished_) return;
    finished_ = true;
    char buf[64];
    std::snprintf(buf, sizeof buf, "ev=END checksum=%016llx\n",
                  static_cast<unsigned long long>(hash_));
    write(buf);
    sync();
}

struct FileTraceWriter::Impl {
    std::ofstream out;
    std::string path;
};

FileTraceWriter::FileTraceWriter(const std::string& path) : impl_(new Impl) {
    impl_->path = path;
    impl_->out.open(path, std::ios::binary | std::ios::trunc);
    if (!impl_->out) {
        delete impl_;
        throw IoError("cannot open trace sink: " + path);
    }
}

FileTraceWriter::~FileTraceWriter() { delete impl_; }

void FileTraceWriter::write(std::string_view bytes) {
    impl_->out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!impl_->out) throw IoError("trace sink write failed: " + impl_->path);
}

void FileTraceWriter::sync() {
    impl_->out.flush();
    if (!impl_->out) throw IoError("trace sink flush failed: " + impl_->path);
}

const std::string& TraceRecord::get(std::string_view k) const {
    auto it = keys.find(k);
    if (it == keys.end()) throw SimInvariantError("trace record missing key: " + std::string(k));
    return it->second;
}

std::uint64_t TraceRecord::get_u64(std::string_view k) const { return std::stoull(get(k)); }

std::vector<TraceRecord> read_trace(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open trace: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_trace(buf.str());
}

std::vector<TraceRecord> parse_trace(const std::string& text) {
    std::istringstream in(text);

    std::vector<TraceRecord> records;
    std::uint64_t hash = 14695981039346656037ull;
    bool saw_end = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.rfind("ev=END ", 0) == 0) {
            auto pos = line.find("checksum=");
            if (pos == std::string::npos) throw ParseError("END line without checksum", lineno);
            std::uint64_t stated = std::stoull(line.substr(pos + 9), nullptr, 16);
            if (stated != hash)
                throw ParseError("trace checksum mismatch (file truncated or edited)", lineno);
            saw_end = true;
            break;
        }
        hash = fnv1a_update(hash, line);
        hash = fnv1a_update(hash, "\n");

        TraceRecord rec;
        std::istringstream ls(line);
        std::string tok;
        int field = 0;
        while (ls >> tok) {
            auto eq = tok.find('=');
            if (eq == std::string::npos) throw ParseError("malformed trace token: " + tok, lineno);
            std::string key = tok.substr(0, eq);
            std::string val = tok.substr(eq + 1);
            if (field == 0) {
                if (key != "t") throw ParseError("trace line must start with t=", lineno);
                rec.t = SimTime{std::stoull(val)};
            } else if (field == 1) {
                if (key != "ev") throw ParseError("expected ev=", lineno);
                auto it = std::find(kEvNames.begin(), kEvNames.end(), val);
                if (it == kEvNames.end()) throw ParseError("unknown trace event: " + val, lineno);
                rec.ev = static_cast<TraceEv>(it - kEvNames.begin());
            } else if (field == 2) {
                if (key != "node") throw ParseError("expected node=", lineno);
                rec.node = static_cast<NodeId>(std::stoul(val));
            } else {
                rec.keys.emplace(std::move(key), std::move(val));
            }
            ++field;
        }
        if (field < 3) throw ParseError("short trace line", lineno);
        records.push_back(std::move(rec));
    }
    if (!saw_end) throw ParseError("trace has no END line", lineno);
    return records;
}

std::string fmt_meters(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

} // namespace manet
