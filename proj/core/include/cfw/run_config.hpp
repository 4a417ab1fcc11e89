#pragma once

#include <cstdint>
#include <string>
#include <string_view>

/// Flat "key = value" run description. Lines starting with '#' and blank
/// lines are ignored; unknown keys are rejected.
namespace cfw {

enum class ProblemKind { KSparseRegression, BirkhoffProjection, SplitBirkhoffBall, AlmIntersection, LogisticSocgs, Custom };
enum class AlgorithmKind { Cfw, Lcfw, Scg, Alm, Socgs };
enum class CorrectorKind { Pairwise, QcLp, QcMnp };
enum class BlockUpdateKind { Vanilla, Corrective };
enum class ScheduleKind { New, Original };

std::string_view to_string(ProblemKind kind);
std::string_view to_string(AlgorithmKind kind);
std::string_view to_string(CorrectorKind kind);

struct RunConfig {
  ProblemKind problem = ProblemKind::KSparseRegression;
  AlgorithmKind algorithm = AlgorithmKind::Cfw;
  CorrectorKind corrector = CorrectorKind::Pairwise;
  BlockUpdateKind block_update = BlockUpdateKind::Corrective;
  ScheduleKind schedule = ScheduleKind::New;
  std::uint64_t seed = 0;

  long n = 50;
  long m = 500;
  long k = 5;
  double tau = 1.0;
  double c = 0.9;
  double q = 0.1;
  double r = 1.0;
  double radius = 1.0;
  double mu = 0.0;
  /// LIBSVM file replacing the synthetic logistic data when non-empty.
  std::string data_path;

  long qc_interval = 10;
  long qc_warmup = 0;
  long qc_min_active_set = 2;
  double laziness_J = 2.0;
  long inner_k = 100;

  long max_iterations = 1000;
  double time_limit_s = 60.0;
  double gap_tolerance = 1e-6;
  std::string output_path = "trace.csv";
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);
/// Applies one "key=value" assignment.
void apply_setting(RunConfig& config, std::string_view assignment);
void set_value(RunConfig& config, std::string_view key, std::string_view value);
/// Throws InvalidConfig on non-positive counts or unsupported combinations.
void validate(const RunConfig& config);

}  // namespace cfw
