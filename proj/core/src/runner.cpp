#include "cfw/runner.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include "cfw/error.hpp"
#include "cfw/libsvm.hpp"
#include "cfw/problems.hpp"
#include "cfw/quadratic_correction.hpp"
#include "cfw/socgs.hpp"
#include "cfw/splitting.hpp"
#include "cfw/trace_io.hpp"

namespace cfw {

namespace {

struct Instance {
  std::shared_ptr<const Objective> objective;
  LmoPtr lmo;
};

CfwParams make_params(const RunConfig& config) {
  CfwParams params;
  params.max_iterations = static_cast<std::size_t>(config.max_iterations);
  params.time_limit_s = config.time_limit_s;
  params.fw_gap_tolerance = config.gap_tolerance;
  params.laziness_J = config.laziness_J;
  return params;
}

QcSchedule make_schedule(const RunConfig& config) {
  return {static_cast<std::size_t>(config.qc_interval), static_cast<std::size_t>(config.qc_warmup),
          static_cast<std::size_t>(config.qc_min_active_set)};
}

std::unique_ptr<Corrector> make_corrector(const RunConfig& config) {
  switch (config.corrector) {
    case CorrectorKind::QcLp:
      return hybrid_corrector(make_schedule(config), QcVariant::Lp);
    case CorrectorKind::QcMnp:
      return hybrid_corrector(make_schedule(config), QcVariant::Mnp);
    case CorrectorKind::Pairwise:
      break;
  }
  return std::make_unique<PairwiseCorrector>();
}

std::shared_ptr<const LogisticObjective> logistic_instance(const RunConfig& config) {
  if (!config.data_path.empty()) return logistic_from_libsvm(load_libsvm(config.data_path));
  return gen_logistic_synthetic(config.n, config.m, config.seed, config.radius).objective;
}

Instance single_instance(const RunConfig& config) {
  switch (config.problem) {
    case ProblemKind::KSparseRegression: {
      auto p = gen_ksparse_regression(config.n, config.m, config.k, config.tau, config.seed);
      return {p.objective, p.lmo};
    }
    case ProblemKind::BirkhoffProjection: {
      auto p = gen_birkhoff_projection(config.n, config.seed);
      return {p.objective, p.lmo};
    }
    case ProblemKind::Custom: {
      auto p = gen_simplex_quadratic(config.n, config.seed, config.mu);
      return {p.objective, p.lmo};
    }
    case ProblemKind::LogisticSocgs: {
      auto obj = logistic_instance(config);
      return {obj, std::make_shared<L1BallOracle>(obj->dimension(), config.radius)};
    }
    default:
      break;
  }
  throw Error(ErrorCode::InvalidConfig, "problem not usable with a single-block algorithm");
}

RunOutcome from_cfw(CfwResult&& r) {
  RunOutcome out;
  out.status = r.status;
  out.primal = r.primal;
  out.fw_gap = r.fw_gap;
  out.iterations = r.iterations;
  out.lmo_calls = r.lmo_calls;
  out.trace = std::move(r.trace);
  return out;
}

RunOutcome from_split(SplitResult&& r) {
  RunOutcome out;
  out.status = r.status;
  out.iterations = r.iterations;
  out.lmo_calls = r.lmo_calls;
  // last record before Stop carries the gap
  for (auto it = r.trace.rbegin(); it != r.trace.rend(); ++it) {
    if (std::isfinite(it->fw_gap)) {
      out.fw_gap = it->fw_gap;
      break;
    }
  }
  if (!r.trace.empty()) out.primal = r.trace.back().primal;
  out.trace = std::move(r.trace);
  return out;
}

std::vector<Atom> split_start(const SplitProblem& problem) {
  std::vector<Atom> x0;
  const Vector direction = Vector::Ones(problem.dimension());
  for (const auto& block : problem.blocks) x0.push_back(block.lmo->minimize(direction));
  return x0;
}

RunOutcome run_split(const RunConfig& config) {
  const CfwParams params = make_params(config);
  const BlockUpdate update =
      config.block_update == BlockUpdateKind::Vanilla ? BlockUpdate::VanillaFW : BlockUpdate::Corrective;
  const SplitSchedule schedule =
      config.schedule == ScheduleKind::Original ? SplitSchedule(original_scg_schedules) : SplitSchedule(scg_schedules);

  if (config.problem == ProblemKind::AlmIntersection) {
    const Index n = config.n;
    Vector shifted = Vector::Zero(n);
    shifted(0) = config.c;
    SplitProblem problem;
    problem.blocks = {{std::make_shared<L2BallOracle>(Vector::Zero(n), config.r), true},
                      {std::make_shared<L2BallOracle>(shifted, config.r), true}};
    problem.weights = Vector::Constant(2, 0.5);
    problem.base_objective = std::make_shared<FunctionObjective>(FunctionObjective::zero(n));
    problem.schedule = schedule;
    return from_split(scg_run(problem, split_start(problem), params, update, [&] { return make_corrector(config); }));
  }

  auto instance = gen_split_birkhoff_ball(config.n, config.c, config.q, config.r, config.seed);
  instance.problem.schedule = schedule;
  return from_split(scg_run(instance.problem, split_start(instance.problem), params, update,
                            [&] { return make_corrector(config); }));
}

RunOutcome run_socgs(const RunConfig& config) {
  auto objective = logistic_instance(config);
  const L1BallOracle lmo(objective->dimension(), config.radius);
  const ExactLogisticHessian hessian(objective);
  SocgsParams params;
  params.outer_iterations = static_cast<std::size_t>(config.max_iterations);
  params.inner_iterations_k = static_cast<std::size_t>(config.inner_k);
  params.qc_warmup = static_cast<std::size_t>(config.qc_warmup);
  params.time_limit_s = config.time_limit_s;
  params.fw_gap_tolerance = config.gap_tolerance;

  PairwiseCorrector outer;
  std::unique_ptr<Corrector> inner;
  switch (config.corrector) {
    case CorrectorKind::QcLp:
      inner = socgs_inner_corrector(QcVariant::Lp, params.qc_warmup);
      break;
    case CorrectorKind::QcMnp:
      inner = socgs_inner_corrector(QcVariant::Mnp, params.qc_warmup);
      break;
    case CorrectorKind::Pairwise:
      inner = std::make_unique<PairwiseCorrector>();
      break;
  }
  auto r = socgs_run(*objective, hessian, lmo, Vector::Zero(objective->dimension()), params, outer, *inner);
  RunOutcome out;
  out.status = r.status;
  out.iterations = r.iterations;
  out.lmo_calls = r.lmo_calls;
  out.primal = objective->value(r.active_set.iterate());
  for (auto it = r.trace.rbegin(); it != r.trace.rend(); ++it) {
    if (std::isfinite(it->fw_gap)) {
      out.fw_gap = it->fw_gap;
      break;
    }
  }
  out.trace = std::move(r.trace);
  return out;
}

}  // namespace

RunOutcome execute(const RunConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  RunOutcome out;
  switch (config.algorithm) {
    case AlgorithmKind::Cfw:
    case AlgorithmKind::Lcfw: {
      const Instance instance = single_instance(config);
      const Atom x0 = instance.lmo->minimize(instance.objective->gradient(Vector::Zero(instance.objective->dimension())));
      auto corrector = make_corrector(config);
      CfwParams params = make_params(config);
      out = from_cfw(config.algorithm == AlgorithmKind::Lcfw
                         ? lcfw_run(*instance.objective, *instance.lmo, *corrector, x0, params)
                         : cfw_run(*instance.objective, *instance.lmo, *corrector, x0, params));
      break;
    }
    case AlgorithmKind::Scg:
    case AlgorithmKind::Alm:
      out = run_split(config);
      break;
    case AlgorithmKind::Socgs:
      out = run_socgs(config);
      break;
  }
  out.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::string summary_line(const RunOutcome& outcome) {
  std::ostringstream s;
  s << "status=" << to_string(outcome.status) << " primal=" << format_double(outcome.primal)
    << " gap=" << format_double(outcome.fw_gap) << " iterations=" << outcome.iterations
    << " lmo_calls=" << outcome.lmo_calls << " wall_s=" << format_double(outcome.wall_s);
  return s.str();
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    const RunOutcome outcome = execute(config);
    write_trace_file(config.output_path, outcome.trace);
    out << summary_line(outcome) << '\n';
    return outcome.status == RunStatus::Converged ? 0 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace cfw
