#include "cfw/frank_wolfe.hpp"

#include <chrono>
#include <cmath>

#include "cfw/error.hpp"
#include "cfw/line_search.hpp"

namespace cfw {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void validate(const CfwParams& params) {
  if (params.max_iterations < 1) throw Error(ErrorCode::InvalidArgument, "max_iterations must be at least 1");
  if (!(params.fw_gap_tolerance >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "fw_gap_tolerance must be nonnegative");
  }
  if (!(params.laziness_J >= 1.0)) throw Error(ErrorCode::InvalidArgument, "laziness_J must be at least 1");
  if (!(params.time_limit_s > 0.0)) throw Error(ErrorCode::InvalidArgument, "time limit must be positive");
}

CfwResult lazy_loop(const Objective& objective, const LinearMinimizationOracle& lmo, Corrector& corrector,
                    ActiveSet active_set, const CfwParams& params);

}  // namespace

std::string_view to_string(StepKind kind) {
  switch (kind) {
    case StepKind::FrankWolfe: return "FW";
    case StepKind::Descent: return "Descent";
    case StepKind::Drop: return "Drop";
    case StepKind::Gap: return "Gap";
    case StepKind::FcfwAccept: return "FcfwAccept";
    case StepKind::PairwiseFallback: return "PairwiseFallback";
    case StepKind::Stop: return "Stop";
  }
  return "FW";
}

std::optional<StepKind> parse_step_kind(std::string_view text) {
  for (StepKind k : {StepKind::FrankWolfe, StepKind::Descent, StepKind::Drop, StepKind::Gap, StepKind::FcfwAccept,
                     StepKind::PairwiseFallback, StepKind::Stop}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

StepKind to_step_kind(CorrectionKind kind) {
  switch (kind) {
    case CorrectionKind::Descent: return StepKind::Descent;
    case CorrectionKind::Drop: return StepKind::Drop;
    case CorrectionKind::FcfwAccept: return StepKind::FcfwAccept;
    case CorrectionKind::PairwiseFallback: return StepKind::PairwiseFallback;
  }
  return StepKind::Descent;
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Converged: return "converged";
    case RunStatus::IterationLimit: return "iteration_limit";
    case RunStatus::TimeLimit: return "time_limit";
  }
  return "unknown";
}

CorrectiveOutcome pairwise_local_step(ActiveSet& active_set, const Objective& objective, const Vector& gradient,
                                      double primal, const ExtremeAtoms& extremes) {
  CorrectiveOutcome out;
  out.kind = CorrectionKind::Descent;
  if (extremes.away == extremes.local_fw) {
    out.new_weights = active_set.weights();
    return out;
  }
  const double cap = active_set.weight(extremes.away);
  const Vector d = active_set.atom(extremes.away).to_dense() - active_set.atom(extremes.local_fw).to_dense();
  const double gamma = line_search(objective, active_set.iterate(), d, cap, &gradient);
  out.dropped = active_set.transfer_weight(extremes.away, extremes.local_fw, gamma);
  if (gamma == cap) out.kind = CorrectionKind::Drop;
  out.progress = primal - objective.value(active_set.iterate());
  out.new_weights = active_set.weights();
  return out;
}

CorrectiveOutcome pairwise_local_step(ActiveSet& active_set, const Objective& objective) {
  const Vector g = objective.gradient(active_set.iterate());
  const double f = objective.value(active_set.iterate());
  return pairwise_local_step(active_set, objective, g, f, active_set.extreme_atoms(g));
}

CorrectiveOutcome pairwise_global_step(ActiveSet& active_set, const Objective& objective, const Vector& gradient,
                                       double primal, std::size_t away, const Atom& global_fw) {
  CorrectiveOutcome out;
  out.kind = CorrectionKind::Descent;
  const double cap = active_set.weight(away);
  const Vector d = active_set.atom(away).to_dense() - global_fw.to_dense();
  if (d.squaredNorm() == 0.0) {
    out.new_weights = active_set.weights();
    return out;
  }
  const double gamma = line_search(objective, active_set.iterate(), d, cap, &gradient);
  out.dropped = active_set.transfer_weight(away, global_fw, gamma);
  if (gamma == cap) out.kind = CorrectionKind::Drop;
  out.progress = primal - objective.value(active_set.iterate());
  out.new_weights = active_set.weights();
  return out;
}

CorrectiveOutcome PairwiseCorrector::correct(const CorrectionRequest& r) {
  return pairwise_local_step(r.active_set, r.objective, r.gradient, r.primal, r.extremes);
}

CorrectiveOutcome GlobalPairwiseCorrector::correct(const CorrectionRequest& r) {
  if (!r.global_fw) return pairwise_local_step(r.active_set, r.objective, r.gradient, r.primal, r.extremes);
  return pairwise_global_step(r.active_set, r.objective, r.gradient, r.primal, r.extremes.away, *r.global_fw);
}

StepReport cfw_step(const Objective& objective, Corrector& corrector, ActiveSet& active_set, const Vector& gradient,
                    double primal, const Atom& fw_vertex, double fw_gap, std::size_t iteration,
                    std::size_t phase_iteration, bool initial, const CorrectiveObserver& observer) {
  StepReport report;
  const ExtremeAtoms extremes = active_set.extreme_atoms(gradient);
  report.local_gap = extremes.local_gap();
  const bool correct = active_set.size() > 1 && (report.local_gap >= fw_gap || initial);
  if (correct) {
    const std::size_t size_before = active_set.size();
    CorrectionRequest request{active_set, objective, gradient, primal, extremes, &fw_vertex,
                              iteration,  phase_iteration, initial};
    report.outcome = corrector.correct(request);
    report.kind = to_step_kind(report.outcome->kind);
    if (observer) {
      CorrectiveEvent event;
      event.iteration = iteration;
      event.local_gap = report.local_gap;
      event.primal_before = primal;
      event.primal_after = primal - report.outcome->progress;
      event.size_before = size_before;
      event.size_after = active_set.size();
      event.outcome = &*report.outcome;
      observer(event);
    }
    return report;
  }
  const Vector d = active_set.iterate() - fw_vertex.to_dense();
  double gamma = 0.0;
  if (d.squaredNorm() > 0.0) gamma = line_search(objective, active_set.iterate(), d, 1.0, &gradient);
  active_set.add_atom(fw_vertex, gamma);
  report.kind = StepKind::FrankWolfe;
  return report;
}

CfwResult cfw_run(const Objective& objective, const LinearMinimizationOracle& lmo, Corrector& corrector,
                  const Atom& x0, const CfwParams& params) {
  if (x0.dimension() != lmo.dimension() || x0.dimension() != objective.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "start point dimension differs from problem");
  }
  if (!lmo.contains(x0.to_dense(), 1e-9)) {
    throw Error(ErrorCode::InfeasibleStart, "start point is not in the feasible region");
  }
  return cfw_run(objective, lmo, corrector, ActiveSet(x0), params);
}

CfwResult cfw_run(const Objective& objective, const LinearMinimizationOracle& lmo, Corrector& corrector,
                  ActiveSet active_set, const CfwParams& params) {
  validate(params);
  if (active_set.empty()) throw Error(ErrorCode::EmptyActiveSet, "warm start is empty");
  if (active_set.dimension() != objective.dimension() || lmo.dimension() != objective.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "problem dimensions disagree");
  }
  if (params.lazy) return lazy_loop(objective, lmo, corrector, std::move(active_set), params);

  const auto start = Clock::now();
  corrector.reset(active_set);
  CfwResult result;
  std::size_t t = 0;
  while (true) {
    const Vector& x = active_set.iterate();
    const Vector g = objective.gradient(x);
    const double f = objective.value(x);
    const Atom v = lmo.minimize(g);
    ++result.lmo_calls;
    const double gap = g.dot(x) - v.dot(g);

    TraceRecord rec;
    rec.iteration = t;
    rec.elapsed_s = seconds_since(start);
    rec.primal = f;
    rec.fw_gap = gap;
    rec.active_set_size = active_set.size();
    rec.lmo_calls = result.lmo_calls;
    result.primal = f;
    result.fw_gap = gap;

    std::optional<RunStatus> stop;
    if (gap <= params.fw_gap_tolerance) {
      stop = RunStatus::Converged;
    } else if (t >= params.max_iterations) {
      stop = RunStatus::IterationLimit;
    } else if (rec.elapsed_s >= params.time_limit_s) {
      stop = RunStatus::TimeLimit;
    }
    if (stop) {
      rec.step_kind = StepKind::Stop;
      result.trace.push_back(rec);
      result.status = *stop;
      break;
    }

    const std::size_t phase = params.phase_iteration.value_or(t);
    const bool initial = t == 0 && corrector.wants_initial_correction(active_set, objective, phase);
    const StepReport step =
        cfw_step(objective, corrector, active_set, g, f, v, gap, t, phase, initial, params.on_correction);
    rec.step_kind = step.kind;
    rec.extra1 = step.local_gap;
    result.trace.push_back(rec);
    ++t;
  }
  result.iterations = t;
  result.active_set = std::move(active_set);
  return result;
}

CfwResult lcfw_run(const Objective& objective, const LinearMinimizationOracle& lmo, Corrector& corrector,
                   const Atom& x0, CfwParams params) {
  params.lazy = true;
  return cfw_run(objective, lmo, corrector, x0, params);
}

namespace {

CfwResult lazy_loop(const Objective& objective, const LinearMinimizationOracle& lmo, Corrector& corrector,
                    ActiveSet active_set, const CfwParams& params) {
  const auto start = Clock::now();
  corrector.reset(active_set);
  CfwResult result;

  std::optional<Atom> cached_vertex;
  std::uint64_t cached_version = 0;
  auto vertex_for = [&](const Vector& g) -> const Atom& {
    if (!cached_vertex || cached_version != active_set.version()) {
      cached_vertex = lmo.minimize(g);
      cached_version = active_set.version();
      ++result.lmo_calls;
    }
    return *cached_vertex;
  };

  {
    const Vector g0 = objective.gradient(active_set.iterate());
    const Atom& v0 = vertex_for(g0);
    result.initial_phi = 0.5 * (g0.dot(active_set.iterate()) - v0.dot(g0));
  }
  double phi = result.initial_phi;

  std::size_t t = 0;
  while (true) {
    const Vector& x = active_set.iterate();
    const Vector g = objective.gradient(x);
    const double f = objective.value(x);

    TraceRecord rec;
    rec.iteration = t;
    rec.elapsed_s = seconds_since(start);
    rec.primal = f;
    rec.fw_gap = phi;
    rec.active_set_size = active_set.size();
    result.primal = f;
    result.fw_gap = phi;

    std::optional<RunStatus> stop;
    if (phi <= params.fw_gap_tolerance / 2.0) {
      stop = RunStatus::Converged;
    } else if (t >= params.max_iterations) {
      stop = RunStatus::IterationLimit;
    } else if (rec.elapsed_s >= params.time_limit_s) {
      stop = RunStatus::TimeLimit;
    }
    if (stop) {
      rec.step_kind = StepKind::Stop;
      rec.lmo_calls = result.lmo_calls;
      result.trace.push_back(rec);
      result.status = *stop;
      break;
    }

    const std::size_t phase = params.phase_iteration.value_or(t);
    const ExtremeAtoms extremes = active_set.extreme_atoms(g);
    const bool initial = t == 0 && corrector.wants_initial_correction(active_set, objective, phase);
    if (active_set.size() > 1 && (extremes.local_gap() >= phi || initial)) {
      const std::size_t size_before = active_set.size();
      CorrectionRequest request{active_set, objective, g, f, extremes, nullptr, t, phase, initial};
      const CorrectiveOutcome outcome = corrector.correct(request);
      rec.step_kind = to_step_kind(outcome.kind);
      if (params.on_correction) {
        CorrectiveEvent event{t, extremes.local_gap(), f, f - outcome.progress, size_before, active_set.size(),
                              &outcome};
        params.on_correction(event);
      }
    } else {
      const Atom v = vertex_for(g);
      const double gap = g.dot(x) - v.dot(g);
      rec.extra1 = gap;
      if (gap >= phi / params.laziness_J) {
        const Vector d = x - v.to_dense();
        const double gamma = d.squaredNorm() > 0.0 ? line_search(objective, x, d, 1.0, &g) : 0.0;
        active_set.add_atom(v, gamma);
        rec.step_kind = StepKind::FrankWolfe;
      } else {
        phi /= 2.0;
        ++result.gap_steps;
        rec.step_kind = StepKind::Gap;
      }
    }
    rec.lmo_calls = result.lmo_calls;
    result.trace.push_back(rec);
    ++t;
  }
  result.iterations = t;
  result.active_set = std::move(active_set);
  return result;
}

}  // namespace

}  // namespace cfw
