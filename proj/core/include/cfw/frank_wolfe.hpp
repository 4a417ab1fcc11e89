#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "cfw/active_set.hpp"
#include "cfw/lmo.hpp"
#include "cfw/objectives.hpp"

namespace cfw {

/// Stop marks the closing trace record, which reports the final state.
enum class StepKind { FrankWolfe, Descent, Drop, Gap, FcfwAccept, PairwiseFallback, Stop };

std::string_view to_string(StepKind kind);
std::optional<StepKind> parse_step_kind(std::string_view text);

enum class CorrectionKind { Descent, Drop, FcfwAccept, PairwiseFallback };

StepKind to_step_kind(CorrectionKind kind);

struct CorrectiveOutcome {
  /// Weights of the active set after the step (aligned with its atoms).
  Vector new_weights;
  CorrectionKind kind = CorrectionKind::Descent;
  /// f(before) - f(after).
  double progress = 0.0;
  std::vector<std::uint64_t> dropped;
  /// Kind of the pairwise step taken when a quadratic correction fell back.
  std::optional<CorrectionKind> fallback_kind;
  bool quadratic_correction = false;
};

struct TraceRecord {
  std::size_t iteration = 0;
  double elapsed_s = 0.0;
  double primal = 0.0;
  double fw_gap = 0.0;
  std::size_t active_set_size = 0;
  StepKind step_kind = StepKind::FrankWolfe;
  std::uint64_t lmo_calls = 0;
  double extra1 = std::numeric_limits<double>::quiet_NaN();
  double extra2 = std::numeric_limits<double>::quiet_NaN();
};

struct CorrectionRequest {
  ActiveSet& active_set;
  const Objective& objective;
  const Vector& gradient;
  double primal;
  ExtremeAtoms extremes;
  /// LMO output of the current iteration when available.
  const Atom* global_fw = nullptr;
  std::size_t iteration = 0;
  /// Iteration count used by warmup rules (outer iteration for inner solves).
  std::size_t phase_iteration = 0;
  bool initial = false;
};

class Corrector {
 public:
  virtual ~Corrector() = default;

  virtual CorrectiveOutcome correct(const CorrectionRequest& request) = 0;
  /// Called once at the start of every run on that run's active set.
  virtual void reset(const ActiveSet&) {}
  /// True when the corrector asks for a correction at the first iteration
  /// regardless of the gap comparison.
  virtual bool wants_initial_correction(const ActiveSet&, const Objective&, std::size_t) const {
    return false;
  }
};

CorrectiveOutcome pairwise_local_step(ActiveSet& active_set, const Objective& objective, const Vector& gradient,
                                      double primal, const ExtremeAtoms& extremes);
CorrectiveOutcome pairwise_local_step(ActiveSet& active_set, const Objective& objective);

CorrectiveOutcome pairwise_global_step(ActiveSet& active_set, const Objective& objective, const Vector& gradient,
                                       double primal, std::size_t away, const Atom& global_fw);

class PairwiseCorrector final : public Corrector {
 public:
  CorrectiveOutcome correct(const CorrectionRequest& request) override;
};

class GlobalPairwiseCorrector final : public Corrector {
 public:
  CorrectiveOutcome correct(const CorrectionRequest& request) override;
};

struct CorrectiveEvent {
  std::size_t iteration = 0;
  double local_gap = 0.0;
  double primal_before = 0.0;
  double primal_after = 0.0;
  std::size_t size_before = 0;
  std::size_t size_after = 0;
  const CorrectiveOutcome* outcome = nullptr;
};

using CorrectiveObserver = std::function<void(const CorrectiveEvent&)>;

struct CfwParams {
  std::size_t max_iterations = 10000;
  double time_limit_s = std::numeric_limits<double>::infinity();
  double fw_gap_tolerance = 1e-7;
  double laziness_J = 2.0;
  bool lazy = false;
  /// Fixed warmup phase handed to the corrector; the iteration counter when unset.
  std::optional<std::size_t> phase_iteration;
  CorrectiveObserver on_correction;
};

enum class RunStatus { Converged, IterationLimit, TimeLimit };

std::string_view to_string(RunStatus status);

struct CfwResult {
  ActiveSet active_set;
  std::vector<TraceRecord> trace;
  RunStatus status = RunStatus::IterationLimit;
  std::size_t iterations = 0;
  std::uint64_t lmo_calls = 0;
  std::size_t gap_steps = 0;
  /// Initial gap estimate of the lazy variant; NaN for eager runs.
  double initial_phi = std::numeric_limits<double>::quiet_NaN();
  double primal = 0.0;
  double fw_gap = 0.0;
};

/// One decision of the eager loop from state (active_set, gradient) with the
/// LMO answer `fw_vertex` already known.
struct StepReport {
  StepKind kind = StepKind::FrankWolfe;
  double local_gap = 0.0;
  std::optional<CorrectiveOutcome> outcome;
};

StepReport cfw_step(const Objective& objective, Corrector& corrector, ActiveSet& active_set, const Vector& gradient,
                    double primal, const Atom& fw_vertex, double fw_gap, std::size_t iteration,
                    std::size_t phase_iteration, bool initial, const CorrectiveObserver& observer = {});

/// Runs the eager loop, or the lazy one when params.lazy is set.
CfwResult cfw_run(const Objective& objective, const LinearMinimizationOracle& lmo, Corrector& corrector,
                  const Atom& x0, const CfwParams& params);
CfwResult cfw_run(const Objective& objective, const LinearMinimizationOracle& lmo, Corrector& corrector,
                  ActiveSet warm_start, const CfwParams& params);

CfwResult lcfw_run(const Objective& objective, const LinearMinimizationOracle& lmo, Corrector& corrector,
                   const Atom& x0, CfwParams params);

}  // namespace cfw
