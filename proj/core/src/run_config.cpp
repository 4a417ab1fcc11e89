#include "cfw/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "cfw/error.hpp"

namespace cfw {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad(std::string_view key, std::string_view value) {
  throw Error(ErrorCode::InvalidConfig, "invalid value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad(key, value);
  return out;
}

double parse_double(std::string_view key, std::string_view value) {
  const double v = parse_number<double>(key, value);
  if (std::isnan(v)) bad(key, value);
  return v;
}

template <typename E, std::size_t N>
E parse_enum(std::string_view key, std::string_view value, const std::pair<std::string_view, E> (&table)[N]) {
  for (const auto& [name, e] : table) {
    if (name == value) return e;
  }
  bad(key, value);
}

constexpr std::pair<std::string_view, ProblemKind> kProblems[] = {
    {"ksparse_regression", ProblemKind::KSparseRegression},
    {"birkhoff_projection", ProblemKind::BirkhoffProjection},
    {"split_birkhoff_ball", ProblemKind::SplitBirkhoffBall},
    {"alm_intersection", ProblemKind::AlmIntersection},
    {"logistic_socgs", ProblemKind::LogisticSocgs},
    {"custom", ProblemKind::Custom},
};
constexpr std::pair<std::string_view, AlgorithmKind> kAlgorithms[] = {
    {"cfw", AlgorithmKind::Cfw}, {"lcfw", AlgorithmKind::Lcfw}, {"scg", AlgorithmKind::Scg},
    {"alm", AlgorithmKind::Alm}, {"socgs", AlgorithmKind::Socgs},
};
constexpr std::pair<std::string_view, CorrectorKind> kCorrectors[] = {
    {"pairwise", CorrectorKind::Pairwise}, {"qc_lp", CorrectorKind::QcLp}, {"qc_mnp", CorrectorKind::QcMnp}};
constexpr std::pair<std::string_view, BlockUpdateKind> kBlockUpdates[] = {
    {"vanilla", BlockUpdateKind::Vanilla}, {"corrective", BlockUpdateKind::Corrective}};
constexpr std::pair<std::string_view, ScheduleKind> kSchedules[] = {
    {"new", ScheduleKind::New}, {"original", ScheduleKind::Original}};

template <typename E, std::size_t N>
std::string_view name_of(E e, const std::pair<std::string_view, E> (&table)[N]) {
  for (const auto& [name, v] : table) {
    if (v == e) return name;
  }
  return "unknown";
}

}  // namespace

std::string_view to_string(ProblemKind kind) { return name_of(kind, kProblems); }
std::string_view to_string(AlgorithmKind kind) { return name_of(kind, kAlgorithms); }
std::string_view to_string(CorrectorKind kind) { return name_of(kind, kCorrectors); }

void set_value(RunConfig& c, std::string_view key, std::string_view value) {
  if (key == "problem") c.problem = parse_enum(key, value, kProblems);
  else if (key == "algorithm") c.algorithm = parse_enum(key, value, kAlgorithms);
  else if (key == "corrector") c.corrector = parse_enum(key, value, kCorrectors);
  else if (key == "block_update") c.block_update = parse_enum(key, value, kBlockUpdates);
  else if (key == "schedule") c.schedule = parse_enum(key, value, kSchedules);
  else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "n") c.n = parse_number<long>(key, value);
  else if (key == "m") c.m = parse_number<long>(key, value);
  else if (key == "k") c.k = parse_number<long>(key, value);
  else if (key == "tau") c.tau = parse_double(key, value);
  else if (key == "c") c.c = parse_double(key, value);
  else if (key == "q") c.q = parse_double(key, value);
  else if (key == "r") c.r = parse_double(key, value);
  else if (key == "radius") c.radius = parse_double(key, value);
  else if (key == "mu") c.mu = parse_double(key, value);
  else if (key == "data") c.data_path = std::string(value);
  else if (key == "qc_interval") c.qc_interval = parse_number<long>(key, value);
  else if (key == "qc_warmup") c.qc_warmup = parse_number<long>(key, value);
  else if (key == "qc_min_active_set") c.qc_min_active_set = parse_number<long>(key, value);
  else if (key == "laziness_J") c.laziness_J = parse_double(key, value);
  else if (key == "inner_k") c.inner_k = parse_number<long>(key, value);
  else if (key == "max_iterations") c.max_iterations = parse_number<long>(key, value);
  else if (key == "time_limit_s") c.time_limit_s = parse_double(key, value);
  else if (key == "gap_tolerance") c.gap_tolerance = parse_double(key, value);
  else if (key == "output") c.output_path = std::string(value);
  else throw Error(ErrorCode::InvalidConfig, "unknown key '" + std::string(key) + "'");
}

void apply_setting(RunConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw Error(ErrorCode::InvalidConfig, "expected key=value, got '" + std::string(assignment) + "'");
  }
  const auto key = trim(assignment.substr(0, eq));
  const auto value = trim(assignment.substr(eq + 1));
  if (key.empty()) throw Error(ErrorCode::InvalidConfig, "empty key");
  set_value(config, key, value);
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    try {
      apply_setting(config, line);
    } catch (const Error& e) {
      throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void validate(const RunConfig& c) {
  auto require = [](bool ok, const std::string& message) {
    if (!ok) throw Error(ErrorCode::InvalidConfig, message);
  };
  require(c.n >= 1 && c.m >= 1 && c.k >= 1, "n, m and k must be positive");
  require(c.max_iterations >= 1, "max_iterations must be positive");
  require(c.inner_k >= 1, "inner_k must be positive");
  require(c.qc_interval >= 1, "qc_interval must be positive");
  require(c.qc_warmup >= 0 && c.qc_min_active_set >= 0, "QC schedule fields must be nonnegative");
  require(c.laziness_J >= 1.0, "laziness_J must be at least 1");
  require(c.time_limit_s > 0.0, "time_limit_s must be positive");
  require(c.gap_tolerance >= 0.0, "gap_tolerance must be nonnegative");
  require(c.tau > 0.0 && c.r > 0.0 && c.radius > 0.0, "tau, r and radius must be positive");
  require(!c.output_path.empty(), "output path must not be empty");

  const bool quadratic = c.problem == ProblemKind::KSparseRegression || c.problem == ProblemKind::BirkhoffProjection ||
                         c.problem == ProblemKind::Custom;
  switch (c.algorithm) {
    case AlgorithmKind::Cfw:
    case AlgorithmKind::Lcfw:
      require(quadratic || c.problem == ProblemKind::LogisticSocgs,
              std::string(to_string(c.algorithm)) + " needs a single-domain problem");
      require(c.corrector == CorrectorKind::Pairwise || quadratic, "quadratic corrections need a quadratic objective");
      break;
    case AlgorithmKind::Scg:
    case AlgorithmKind::Alm:
      require(c.problem == ProblemKind::SplitBirkhoffBall || c.problem == ProblemKind::AlmIntersection,
              std::string(to_string(c.algorithm)) + " needs a two-block problem");
      break;
    case AlgorithmKind::Socgs:
      require(c.problem == ProblemKind::LogisticSocgs, "socgs runs on logistic_socgs");
      break;
  }
  if (c.problem == ProblemKind::KSparseRegression) require(c.k <= c.n, "k must not exceed n");
  if (c.problem == ProblemKind::SplitBirkhoffBall) {
    require(c.q > 0.0 && c.q < 1.0, "q must lie in (0, 1)");
    require(c.n >= 2, "Birkhoff side must be at least 2");
  }
  if (c.problem == ProblemKind::BirkhoffProjection) require(c.n >= 2, "Birkhoff side must be at least 2");
}

}  // namespace cfw
