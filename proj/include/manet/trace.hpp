#pragma once

#include "manet/messages.hpp"
#include "manet/sim_time.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace manet {

// Line format: `t=<us> ev=<KIND> node=<id> [key=value ...]`, keys sorted
// alphabetically after the fixed prefix; the file ends with
// `ev=END checksum=<hex>` (FNV-1a 64 over every preceding byte).

enum class TraceEv : std::uint8_t { SEND, RECV, FWD, DROP, RERR, DETECT, MOVE, ENERGY };

std::string_view to_string(TraceEv ev);

class TraceWriter {
public:
    virtual ~TraceWriter() = default;

    // kv pairs are sorted internally before emission.
    void record(SimTime t, TraceEv ev, NodeId node,
                std::initializer_list<std::pair<std::string_view, std::string>> kv);

    // Writes the END line with the accumulated checksum.
    void finish();

    std::uint64_t lines() const { return lines_; }
    std::uint64_t checksum() const { return hash_; }

protected:
    virtual void write(std::string_view bytes) = 0;
    virtual void sync() {} // flush to the sink; called by finish()

private:
    std::uint64_t hash_ = 14695981039346656037ull;
    std::uint64_t lines_ = 0;
    bool finished_ = false;
};

// Writer backed by a file; write failures raise IoError (SinkFailure).
class FileTraceWriter final : public TraceWriter {
public:
    explicit FileTraceWriter(const std::string& path);
    ~FileTraceWriter() override;
    FileTraceWriter(const FileTraceWriter&) = delete;
    FileTraceWriter& operator=(const FileTraceWriter&) = delete;

protected:
    void write(std::string_view bytes) override;
    void sync() override;

private:
    struct Impl;
    Impl* impl_;
};

// In-memory writer for tests and piping.
class StringTraceWriter final : public TraceWriter {
public:
    const std::string& str() const { return buf_; }

protected:
    void write(std::string_view bytes) override { buf_.append(bytes); }

private:
    std::string buf_;
};

// Parsed trace line. Values stay as strings; typed accessors convert on demand.
struct TraceRecord {
    SimTime t;
    TraceEv ev;
    NodeId node = 0;
    std::map<std::string, std::string, std::less<>> keys;

    bool has(std::string_view k) const { return keys.find(k) != keys.end(); }
    const std::string& get(std::string_view k) const;
    std::uint64_t get_u64(std::string_view k) const;
};

// Reads and verifies a trace file: checksum of the END line must match.
// Raises ParseError on malformed lines, IoError on missing file.
std::vector<TraceRecord> read_trace(const std::string& path);

// Same, from an in-memory trace (e.g. StringTraceWriter::str()).
std::vector<TraceRecord> parse_trace(const std::string& text);

// Helpers used by both the writer call sites and tests.
std::string fmt_meters(double v); // fixed %.3f, platform-stable for our value range

} // namespace manet
