#pragma once

#include <stdexcept>
#include <string>

namespace manet {

// Exit-code mapping (see tools/): 1 = parse/validation, 2 = runtime invariant, 3 = I/O.

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(const std::string& msg, int line_, int column_ = 0)
        : std::runtime_error(msg + " (line " + std::to_string(line_) +
                             (column_ > 0 ? ", col " + std::to_string(column_) : "") + ")"),
          line(line_), column(column_) {}
};

struct ValidationError : std::runtime_error {
    std::string field;
    ValidationError(std::string field_, const std::string& constraint)
        : std::runtime_error(field_ + ": " + constraint), field(std::move(field_)) {}
};

struct SchedulingInPast : std::logic_error {
    using std::logic_error::logic_error;
};

struct SimInvariantError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConservationViolation : SimInvariantError {
    using SimInvariantError::SimInvariantError;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace manet
