#include "cfw/socgs.hpp"

#include <chrono>
#include <cmath>

#include "cfw/error.hpp"

namespace cfw {

ExactLogisticHessian::ExactLogisticHessian(std::shared_ptr<const LogisticObjective> objective)
    : objective_(std::move(objective)) {
  if (!objective_) throw Error(ErrorCode::InvalidArgument, "null logistic objective");
}

QuadraticObjective build_quadratic_model(const Objective& objective, const HessianOracle& hessian, const Vector& x_t) {
  Matrix h = hessian.matrix_at(x_t);
  if (h.rows() != x_t.size() || h.cols() != x_t.size()) {
    throw Error(ErrorCode::DimensionMismatch, "Hessian size differs from point dimension");
  }
  h = 0.5 * (h + h.transpose()).eval();
  const Vector g = objective.gradient(x_t);
  const Vector hx = h * x_t;
  Vector b = g - hx;
  const double c = -(0.5 * x_t.dot(hx) + b.dot(x_t));
  return QuadraticObjective(std::make_shared<const Matrix>(std::move(h)), 1.0, 0.0, std::move(b), c);
}

PvmResult pvm_inexact_step(const QuadraticObjective& model, const LinearMinimizationOracle& lmo,
                           const ActiveSet& warm_start, std::size_t k, std::optional<double> gap_threshold,
                           Corrector& corrector, std::size_t outer_iteration) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "inner iteration budget must be at least 1");
  CfwParams params;
  params.max_iterations = k;
  params.fw_gap_tolerance = gap_threshold ? std::max(0.0, *gap_threshold) : 0.0;
  params.phase_iteration = outer_iteration;
  PvmResult out;
  out.inner = cfw_run(model, lmo, corrector, warm_start, params);
  out.active_set = out.inner.active_set;
  return out;
}

std::unique_ptr<Corrector> socgs_inner_corrector(QcVariant variant, std::size_t qc_warmup) {
  return std::make_unique<HybridCorrector>(QcSchedule{30, qc_warmup, 2}, variant, true);
}

SocgsResult socgs_run(const Objective& objective, const HessianOracle& hessian, const LinearMinimizationOracle& lmo,
                      const Vector& start, const SocgsParams& params, Corrector& outer_corrector,
                      Corrector& inner_corrector) {
  if (start.size() != objective.dimension() || lmo.dimension() != objective.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "problem dimensions disagree");
  }
  if (params.inner_iterations_k < 1) throw Error(ErrorCode::InvalidArgument, "inner_iterations_k must be at least 1");

  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  SocgsResult result;
  ActiveSet active_set(lmo.minimize(objective.gradient(start)));
  result.lmo_calls = 1;
  outer_corrector.reset(active_set);

  std::size_t t = 0;
  while (true) {
    const Vector x = active_set.iterate();
    const Vector g = objective.gradient(x);
    const double f = objective.value(x);
    const Atom v = lmo.minimize(g);
    ++result.lmo_calls;
    const double gap = g.dot(x) - v.dot(g);

    TraceRecord rec;
    rec.iteration = t;
    rec.elapsed_s = std::chrono::duration<double>(Clock::now() - t0).count();
    rec.primal = f;
    rec.fw_gap = gap;
    rec.active_set_size = active_set.size();

    std::optional<RunStatus> stop;
    if (gap <= params.fw_gap_tolerance) {
      stop = RunStatus::Converged;
    } else if (t >= params.outer_iterations) {
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

    ActiveSet ocs = active_set;
    const StepReport ocs_step = cfw_step(objective, outer_corrector, ocs, g, f, v, gap, t, t, false);
    const double f_ocs = objective.value(ocs.iterate());

    const QuadraticObjective model = build_quadratic_model(objective, hessian, x);
    std::optional<double> threshold = params.inner_gap_threshold;
    if (params.lower_bound) {
      const double gn = g.norm();
      if (gn > 0.0) threshold = std::pow(params.lower_bound(x) / gn, 4);
    }
    PvmResult pvm = pvm_inexact_step(model, lmo, active_set, params.inner_iterations_k, threshold, inner_corrector, t);
    result.lmo_calls += pvm.inner.lmo_calls;
    const double f_pvm = objective.value(pvm.active_set.iterate());

    rec.step_kind = ocs_step.kind;
    rec.extra1 = static_cast<double>(pvm.inner.iterations);
    if (f_pvm <= f_ocs) {
      active_set = std::move(pvm.active_set);
      rec.extra2 = static_cast<double>(SocgsBranch::Pvm);
      ++result.pvm_wins;
    } else {
      active_set = std::move(ocs);
      rec.extra2 = static_cast<double>(SocgsBranch::Ocs);
    }
    rec.lmo_calls = result.lmo_calls;
    result.trace.push_back(rec);
    ++t;
  }
  result.iterations = t;
  result.active_set = std::move(active_set);
  return result;
}

}  // namespace cfw
