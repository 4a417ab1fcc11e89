#include "cfw/splitting.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "cfw/error.hpp"
#include "cfw/line_search.hpp"

namespace cfw {

namespace {

using Clock = std::chrono::steady_clock;

SplitState state_of(const std::vector<ActiveSet>& sets, const Vector& weights) {
  std::vector<Vector> blocks;
  blocks.reserve(sets.size());
  for (const auto& s : sets) blocks.push_back(s.iterate());
  return SplitState::from_blocks(std::move(blocks), weights);
}

void fw_line_search_step(const Objective& objective, ActiveSet& set, const Vector& gradient, const Atom& v) {
  const Vector d = set.iterate() - v.to_dense();
  const double gamma = d.squaredNorm() > 0.0 ? line_search(objective, set.iterate(), d, 1.0, &gradient) : 0.0;
  set.add_atom(v, gamma);
}

}  // namespace

ScheduleValue scg_schedules(std::size_t t) {
  const double s = static_cast<double>(t) + 2.0;
  const double lambda = std::log(s);
  return {lambda, std::min(1.0, 2.0 / (std::sqrt(s) * lambda))};
}

ScheduleValue original_scg_schedules(std::size_t t) {
  const double s = static_cast<double>(t) + 2.0;
  return {std::log(s), std::min(1.0, 2.0 / std::sqrt(s))};
}

Index SplitProblem::dimension() const {
  return blocks.empty() || !blocks.front().lmo ? 0 : blocks.front().lmo->dimension();
}

void SplitProblem::validate() const {
  if (blocks.size() < 2) throw Error(ErrorCode::InvalidArgument, "splitting needs at least two blocks");
  if (static_cast<Index>(blocks.size()) != weights.size()) {
    throw Error(ErrorCode::DimensionMismatch, "weight count differs from block count");
  }
  if (!weights.allFinite() || weights.minCoeff() <= 0.0 || std::abs(weights.sum() - 1.0) > 1e-12) {
    throw Error(ErrorCode::WeightValidation, "block weights must be positive and sum to one");
  }
  for (const auto& b : blocks) {
    if (!b.lmo) throw Error(ErrorCode::InvalidArgument, "null block oracle");
    if (b.lmo->dimension() != dimension()) throw Error(ErrorCode::DimensionMismatch, "blocks differ in dimension");
  }
  if (!base_objective) throw Error(ErrorCode::InvalidArgument, "missing base objective");
  if (base_objective->dimension() != dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "objective dimension differs from blocks");
  }
  if (!schedule) throw Error(ErrorCode::InvalidArgument, "missing schedule");
}

SplitState SplitState::from_blocks(std::vector<Vector> blocks, const Vector& weights) {
  if (blocks.empty() || static_cast<Index>(blocks.size()) != weights.size()) {
    throw Error(ErrorCode::DimensionMismatch, "block count differs from weight count");
  }
  SplitState s;
  s.averaged_point = Vector::Zero(blocks.front().size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].size() != s.averaged_point.size()) {
      throw Error(ErrorCode::DimensionMismatch, "blocks differ in dimension");
    }
    s.averaged_point.noalias() += weights(static_cast<Index>(i)) * blocks[i];
  }
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    s.diagonal_distance_sq += weights(static_cast<Index>(i)) * (blocks[i] - s.averaged_point).squaredNorm();
  }
  s.block_iterates = std::move(blocks);
  return s;
}

double split_objective(const SplitProblem& problem, const SplitState& state, double lambda) {
  return problem.base_objective->value(state.averaged_point) + 0.5 * lambda * state.diagonal_distance_sq;
}

Vector scg_block_direction(const SplitState& state, std::size_t block, const Vector& grad_avg, double lambda) {
  return grad_avg + lambda * (state.block_iterates.at(block) - state.averaged_point);
}

std::unique_ptr<Objective> block_objective(const SplitProblem& problem, const SplitState& state, std::size_t block,
                                           double lambda) {
  const double w = problem.weights(static_cast<Index>(block));
  const Vector rest = state.averaged_point - w * state.block_iterates.at(block);
  double others_sq = 0.0;
  for (std::size_t j = 0; j < state.block_iterates.size(); ++j) {
    if (j != block) others_sq += problem.weights(static_cast<Index>(j)) * state.block_iterates[j].squaredNorm();
  }
  const double penalty_const = 0.5 * lambda * (others_sq - rest.squaredNorm());

  if (const QuadraticObjective* q = problem.base_objective->as_quadratic()) {
    Vector b = w * (q->apply(rest) + q->linear()) - lambda * w * rest;
    const double c = 0.5 * rest.dot(q->apply(rest)) + q->linear().dot(rest) + q->constant() + penalty_const;
    return std::make_unique<QuadraticObjective>(q->dense_part(), w * w * q->dense_scale(),
                                                w * w * q->shift() + lambda * w * (1.0 - w), std::move(b), c);
  }

  std::shared_ptr<const Objective> base = problem.base_objective;
  const double curv = lambda * w * (1.0 - w);
  return std::make_unique<FunctionObjective>(
      base->dimension(),
      [=](const Vector& y) {
        return base->value(rest + w * y) + 0.5 * curv * y.squaredNorm() - lambda * w * rest.dot(y) + penalty_const;
      },
      [=](const Vector& y) -> Vector { return w * base->gradient(rest + w * y) + curv * y - lambda * w * rest; });
}

SplitResult scg_run(const SplitProblem& problem, const std::vector<Atom>& x0, const CfwParams& params,
                    BlockUpdate block_update, const CorrectorFactory& corrector_factory) {
  problem.validate();
  if (x0.size() != problem.blocks.size()) {
    throw Error(ErrorCode::DimensionMismatch, "one start atom per block is required");
  }
  if (params.max_iterations < 1) throw Error(ErrorCode::InvalidArgument, "max_iterations must be at least 1");

  std::vector<ActiveSet> sets;
  std::vector<std::unique_ptr<Corrector>> correctors;
  for (std::size_t i = 0; i < x0.size(); ++i) {
    if (!problem.blocks[i].lmo->contains(x0[i].to_dense(), 1e-9)) {
      throw Error(ErrorCode::InfeasibleStart, "start atom of block " + std::to_string(i) + " is infeasible");
    }
    sets.emplace_back(x0[i]);
    correctors.push_back(corrector_factory ? corrector_factory() : std::make_unique<PairwiseCorrector>());
    correctors.back()->reset(sets.back());
  }

  const auto start = Clock::now();
  const std::size_t m = sets.size();
  SplitResult result;

  auto record = [&](std::size_t t, double lambda) {
    const SplitState state = state_of(sets, problem.weights);
    TraceRecord rec;
    rec.iteration = t;
    rec.elapsed_s = std::chrono::duration<double>(Clock::now() - start).count();
    rec.primal = split_objective(problem, state, lambda);
    rec.extra1 = state.diagonal_distance_sq;
    rec.extra2 = lambda;
    rec.lmo_calls = result.lmo_calls;
    std::vector<std::size_t> sizes;
    for (const auto& s : sets) {
      sizes.push_back(s.size());
      rec.active_set_size += s.size();
    }
    result.averaged_values.push_back(problem.base_objective->value(state.averaged_point));
    result.block_sizes.push_back(std::move(sizes));
    return rec;
  };

  std::size_t t = 0;
  bool converged = false;
  while (true) {
    const ScheduleValue sched = problem.schedule(t);
    TraceRecord rec = record(t, sched.lambda);
    if (converged || t >= params.max_iterations || rec.elapsed_s >= params.time_limit_s) {
      result.status = converged ? RunStatus::Converged
                      : t >= params.max_iterations ? RunStatus::IterationLimit
                                                   : RunStatus::TimeLimit;
      rec.step_kind = StepKind::Stop;
      rec.fw_gap = std::numeric_limits<double>::quiet_NaN();
      result.trace.push_back(rec);
      break;
    }

    double gap_total = 0.0;
    if (block_update == BlockUpdate::VanillaFW) {
      const SplitState state = state_of(sets, problem.weights);
      const Vector g = problem.base_objective->gradient(state.averaged_point);
      std::vector<Atom> vertices;
      for (std::size_t i = 0; i < m; ++i) {
        const Vector d = scg_block_direction(state, i, g, sched.lambda);
        vertices.push_back(problem.blocks[i].lmo->minimize(d));
        ++result.lmo_calls;
        gap_total += problem.weights(static_cast<Index>(i)) * (d.dot(state.block_iterates[i]) - vertices.back().dot(d));
      }
      rec.fw_gap = gap_total;
      rec.lmo_calls = result.lmo_calls;
      if (gap_total <= params.fw_gap_tolerance) {
        converged = true;
        rec.step_kind = StepKind::Stop;
        result.trace.push_back(rec);
        result.status = RunStatus::Converged;
        break;
      }
      const double gamma = std::clamp(sched.gamma, 0.0, 1.0);
      for (std::size_t i = 0; i < m; ++i) sets[i].add_atom(vertices[i], gamma);
      rec.step_kind = StepKind::FrankWolfe;
    } else {
      std::optional<StepKind> first_kind;
      for (std::size_t i = 0; i < m; ++i) {
        const SplitState state = state_of(sets, problem.weights);
        const auto phi = block_objective(problem, state, i, sched.lambda);
        const Vector& x = sets[i].iterate();
        const Vector g = phi->gradient(x);
        const double f = phi->value(x);
        const Atom v = problem.blocks[i].lmo->minimize(g);
        ++result.lmo_calls;
        const double gap = g.dot(x) - v.dot(g);
        gap_total += gap;
        StepKind kind = StepKind::FrankWolfe;
        if (problem.blocks[i].corrective) {
          kind = cfw_step(*phi, *correctors[i], sets[i], g, f, v, gap, t, params.phase_iteration.value_or(t), false,
                          params.on_correction)
                     .kind;
        } else {
          fw_line_search_step(*phi, sets[i], g, v);
        }
        if (!first_kind && problem.blocks[i].corrective) first_kind = kind;
      }
      rec.fw_gap = gap_total;
      rec.lmo_calls = result.lmo_calls;
      rec.step_kind = first_kind.value_or(StepKind::FrankWolfe);
      converged = gap_total <= params.fw_gap_tolerance;
    }
    result.trace.push_back(rec);
    ++t;
  }

  result.iterations = t;
  result.state = state_of(sets, problem.weights);
  result.active_sets = std::move(sets);
  return result;
}

AlmResult alm_run(LmoPtr first, LmoPtr second, const Atom& x0, const Atom& y0, const CfwParams& params,
                  BlockUpdate block_update) {
  if (!first || !second) throw Error(ErrorCode::InvalidArgument, "null block oracle");
  if (first->dimension() != second->dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "ALM blocks must have equal dimension");
  }
  SplitProblem problem;
  problem.blocks = {{std::move(first), true}, {std::move(second), true}};
  problem.weights = Vector::Constant(2, 0.5);
  problem.base_objective = std::make_shared<FunctionObjective>(FunctionObjective::zero(x0.dimension()));
  AlmResult out;
  out.run = scg_run(problem, {x0, y0}, params, block_update);
  out.distance_sq = (out.run.state.block_iterates[0] - out.run.state.block_iterates[1]).squaredNorm();
  return out;
}

}  // namespace cfw
