#include "cfw/libsvm.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

#include "cfw/error.hpp"
#include "cfw/trace_io.hpp"

namespace cfw {

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& message) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + message);
}

struct Row {
  double label = 0.0;
  std::vector<std::pair<Index, double>> entries;
};

double parse_value(std::string_view s, std::size_t line) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    parse_error(line, "bad number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

LibsvmData parse_libsvm(const std::string& text) {
  std::vector<Row> rows;
  Index max_index = 0;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
      const auto start = line.find_first_not_of(" \t\r", pos);
      if (start == std::string_view::npos) break;
      const auto end = line.find_first_of(" \t\r", start);
      tokens.push_back(line.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
      pos = end == std::string_view::npos ? line.size() : end;
    }
    if (tokens.empty()) continue;

    Row row;
    const double label = parse_value(tokens[0], line_no);
    if (label == 1.0) {
      row.label = 1.0;
    } else if (label == -1.0 || label == 0.0) {
      row.label = -1.0;
    } else {
      parse_error(line_no, "label must be -1, 0 or +1");
    }
    Index previous = 0;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const auto colon = tokens[t].find(':');
      if (colon == std::string_view::npos) parse_error(line_no, "expected idx:val, got '" + std::string(tokens[t]) + "'");
      const auto idx_text = tokens[t].substr(0, colon);
      Index idx = 0;
      const auto [ptr, ec] = std::from_chars(idx_text.data(), idx_text.data() + idx_text.size(), idx);
      if (ec != std::errc() || ptr != idx_text.data() + idx_text.size() || idx < 1) {
        parse_error(line_no, "bad feature index '" + std::string(idx_text) + "'");
      }
      if (idx <= previous) parse_error(line_no, "feature indices must increase");
      previous = idx;
      row.entries.emplace_back(idx - 1, parse_value(tokens[t].substr(colon + 1), line_no));
      max_index = std::max(max_index, idx);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyDataset, "no samples found");

  LibsvmData data;
  data.max_index = max_index;
  data.features = Matrix::Zero(static_cast<Index>(rows.size()), max_index);
  data.labels.resize(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    data.labels(static_cast<Index>(i)) = rows[i].label;
    for (const auto& [j, v] : rows[i].entries) data.features(static_cast<Index>(i), j) = v;
  }
  return data;
}

LibsvmData load_libsvm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open dataset '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_libsvm(buffer.str());
}

void write_libsvm(const std::string& path, const Matrix& features, const Vector& labels) {
  if (features.rows() != labels.size()) throw Error(ErrorCode::DimensionMismatch, "label count differs from rows");
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write dataset '" + path + "'");
  for (Index i = 0; i < features.rows(); ++i) {
    out << (labels(i) > 0 ? "+1" : "-1");
    for (Index j = 0; j < features.cols(); ++j) {
      if (features(i, j) != 0.0) out << ' ' << (j + 1) << ':' << format_double(features(i, j));
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "failed writing dataset '" + path + "'");
}

std::shared_ptr<const LogisticObjective> logistic_from_libsvm(const LibsvmData& data) {
  return std::make_shared<const LogisticObjective>(data.features, data.labels);
}

}  // namespace cfw
