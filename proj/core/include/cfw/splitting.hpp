#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "cfw/frank_wolfe.hpp"

/// Minimization of f over an intersection of sets X_1, ..., X_m through the
/// penalized product problem
///   F_lambda(x) = f(sum_i w_i x^i) + lambda/2 * sum_i w_i ||x^i - xbar||^2
/// with x^i in X_i.
namespace cfw {

struct ScheduleValue {
  double lambda = 0.0;
  double gamma = 0.0;
};

using SplitSchedule = std::function<ScheduleValue(std::size_t)>;

/// lambda_t = ln(t + 2), gamma_t = min(1, 2 / (sqrt(t + 2) ln(t + 2))).
ScheduleValue scg_schedules(std::size_t t);
/// Earlier schedule kept for comparison: lambda_t = ln(t + 2), gamma_t = min(1, 2 / sqrt(t + 2)).
ScheduleValue original_scg_schedules(std::size_t t);

struct SplitBlock {
  LmoPtr lmo;
  /// Corrective blocks use the block corrector; others take plain FW steps
  /// with line search.
  bool corrective = true;
};

struct SplitProblem {
  std::vector<SplitBlock> blocks;
  Vector weights;
  std::shared_ptr<const Objective> base_objective;
  SplitSchedule schedule = scg_schedules;

  Index dimension() const;
  void validate() const;
};

struct SplitState {
  std::vector<Vector> block_iterates;
  Vector averaged_point;
  double diagonal_distance_sq = 0.0;

  static SplitState from_blocks(std::vector<Vector> blocks, const Vector& weights);
};

double split_objective(const SplitProblem& problem, const SplitState& state, double lambda);

/// g + lambda (x^i - xbar): the linearization handed to block i's oracle.
Vector scg_block_direction(const SplitState& state, std::size_t block, const Vector& grad_avg, double lambda);

/// F_lambda restricted to block `block` with all other blocks frozen.
std::unique_ptr<Objective> block_objective(const SplitProblem& problem, const SplitState& state, std::size_t block,
                                           double lambda);

enum class BlockUpdate { VanillaFW, Corrective };

using CorrectorFactory = std::function<std::unique_ptr<Corrector>()>;

struct SplitResult {
  SplitState state;
  std::vector<ActiveSet> active_sets;
  /// fw_gap is the weighted FW gap of F_lambda; extra1 = diagonal distance
  /// squared, extra2 = lambda_t. In corrective mode step_kind is the one
  /// taken by the first corrective block.
  std::vector<TraceRecord> trace;
  std::vector<double> averaged_values;
  std::vector<std::vector<std::size_t>> block_sizes;
  RunStatus status = RunStatus::IterationLimit;
  std::size_t iterations = 0;
  std::uint64_t lmo_calls = 0;
};

/// Vanilla mode updates all blocks from the same xbar_t with the open-loop
/// step gamma_t. Corrective mode cycles through the blocks, taking one
/// corrective-or-FW decision with line search on F_lambda_t per block.
SplitResult scg_run(const SplitProblem& problem, const std::vector<Atom>& x0, const CfwParams& params,
                    BlockUpdate block_update, const CorrectorFactory& corrector_factory = {});

struct AlmResult {
  SplitResult run;
  double distance_sq = 0.0;
};

/// Two blocks, f = 0; converges to a closest pair of points.
AlmResult alm_run(LmoPtr first, LmoPtr second, const Atom& x0, const Atom& y0, const CfwParams& params,
                  BlockUpdate block_update = BlockUpdate::Corrective);

}  // namespace cfw
