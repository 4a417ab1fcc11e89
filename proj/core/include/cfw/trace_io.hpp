#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cfw/frank_wolfe.hpp"

namespace cfw {

inline constexpr const char* kTraceHeader =
    "iteration,elapsed_s,primal,fw_gap,active_set_size,step_kind,lmo_calls,extra1,extra2";

/// Shortest round-trip decimal form; "nan", "inf" and "-inf" for non-finite values.
std::string format_double(double value);

void write_trace(std::ostream& out, const std::vector<TraceRecord>& records);
void write_trace_file(const std::string& path, const std::vector<TraceRecord>& records);

/// Throws ParseError naming the offending line.
std::vector<TraceRecord> read_trace(std::istream& in);
std::vector<TraceRecord> read_trace_file(const std::string& path);

/// Structural checks (consecutive iterations, monotone LMO counter, sizes >= 1,
/// single closing Stop row). Returns human-readable problems; empty when valid.
std::vector<std::string> validate_trace(const std::vector<TraceRecord>& records);

}  // namespace cfw
