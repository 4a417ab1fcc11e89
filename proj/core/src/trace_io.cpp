#include "cfw/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "cfw/error.hpp"

namespace cfw {

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& message) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + message);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double field_double(std::string_view s, std::size_t line, const char* column) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    parse_error(line, std::string("bad number in column ") + column);
  }
  return v;
}

template <typename T>
T field_count(std::string_view s, std::size_t line, const char* column) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    parse_error(line, std::string("bad count in column ") + column);
  }
  return v;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_trace(std::ostream& out, const std::vector<TraceRecord>& records) {
  out << kTraceHeader << '\n';
  for (const auto& r : records) {
    out << r.iteration << ',' << format_double(r.elapsed_s) << ',' << format_double(r.primal) << ','
        << format_double(r.fw_gap) << ',' << r.active_set_size << ',' << to_string(r.step_kind) << ','
        << r.lmo_calls << ',' << format_double(r.extra1) << ',' << format_double(r.extra2) << '\n';
  }
}

void write_trace_file(const std::string& path, const std::vector<TraceRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write trace '" + path + "'");
  write_trace(out, records);
  if (!out) throw Error(ErrorCode::IoError, "failed writing trace '" + path + "'");
}

std::vector<TraceRecord> read_trace(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) parse_error(1, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) parse_error(1, "unexpected header");

  std::vector<TraceRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 9) parse_error(line_no, "expected 9 fields, found " + std::to_string(f.size()));
    TraceRecord r;
    r.iteration = field_count<std::size_t>(f[0], line_no, "iteration");
    r.elapsed_s = field_double(f[1], line_no, "elapsed_s");
    r.primal = field_double(f[2], line_no, "primal");
    r.fw_gap = field_double(f[3], line_no, "fw_gap");
    r.active_set_size = field_count<std::size_t>(f[4], line_no, "active_set_size");
    const auto kind = parse_step_kind(f[5]);
    if (!kind) parse_error(line_no, "unknown step kind '" + std::string(f[5]) + "'");
    r.step_kind = *kind;
    r.lmo_calls = field_count<std::uint64_t>(f[6], line_no, "lmo_calls");
    r.extra1 = field_double(f[7], line_no, "extra1");
    r.extra2 = field_double(f[8], line_no, "extra2");
    records.push_back(r);
  }
  return records;
}

std::vector<TraceRecord> read_trace_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open trace '" + path + "'");
  return read_trace(in);
}

std::vector<std::string> validate_trace(const std::vector<TraceRecord>& records) {
  std::vector<std::string> problems;
  if (records.empty()) {
    problems.emplace_back("trace has no records");
    return problems;
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const std::string where = "record " + std::to_string(i) + ": ";
    if (r.iteration != i) problems.push_back(where + "iteration " + std::to_string(r.iteration) + " out of sequence");
    if (r.active_set_size < 1) problems.push_back(where + "active set size below 1");
    if (i > 0 && r.lmo_calls < records[i - 1].lmo_calls) problems.push_back(where + "lmo_calls decreased");
    if (i > 0 && r.elapsed_s < records[i - 1].elapsed_s) problems.push_back(where + "elapsed_s decreased");
    if (r.step_kind == StepKind::Stop && i + 1 != records.size()) problems.push_back(where + "Stop before the end");
  }
  if (records.back().step_kind != StepKind::Stop) problems.emplace_back("last record is not a Stop row");
  return problems;
}

}  // namespace cfw
