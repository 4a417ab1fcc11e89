#include "cfw/quadratic_correction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "cfw/error.hpp"

namespace cfw {

namespace {

struct GramData {
  Matrix gram;
  Vector linear;
};

GramData gram_data(ActiveSet& active_set, const QuadraticObjective& objective) {
  return {active_set.quadratic_gram(objective), active_set.linear_products(objective)};
}

AffineSystem assemble(const GramData& data) {
  const Index k = data.gram.rows() - 1;
  const Matrix& g = data.gram;
  AffineSystem sys;
  sys.anchor_index = 0;
  sys.reduced_matrix.resize(k, k);
  sys.reduced_rhs.resize(k);
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      sys.reduced_matrix(i, j) = g(i + 1, j + 1) - g(i + 1, 0) - g(0, j + 1) + g(0, 0);
    }
    sys.reduced_rhs(i) = -(g(i + 1, 0) - g(0, 0) + data.linear(i + 1) - data.linear(0));
  }
  // Symmetrize away rounding so the solver's symmetry check sees exact symmetry.
  sys.reduced_matrix = 0.5 * (sys.reduced_matrix + sys.reduced_matrix.transpose()).eval();
  return sys;
}

const QuadraticObjective& require_quadratic(const Objective& objective) {
  const QuadraticObjective* q = objective.as_quadratic();
  if (!q) throw Error(ErrorCode::InvalidArgument, "quadratic correction needs a quadratic objective");
  return *q;
}

CorrectiveOutcome fallback(const CorrectionRequest& r) {
  CorrectiveOutcome out = pairwise_local_step(r.active_set, r.objective, r.gradient, r.primal, r.extremes);
  out.fallback_kind = out.kind;
  out.kind = CorrectionKind::PairwiseFallback;
  out.quadratic_correction = true;
  return out;
}

/// Applies new weights unless f would increase; returns false after reverting.
bool apply_if_not_worse(const CorrectionRequest& r, const Vector& weights, CorrectiveOutcome& out) {
  ActiveSet backup = r.active_set;
  out.dropped = r.active_set.apply_weights(weights);
  const double after = r.objective.value(r.active_set.iterate());
  if (after > r.primal + 1e-10 * (1.0 + std::abs(r.primal))) {
    r.active_set = std::move(backup);
    out.dropped.clear();
    return false;
  }
  out.progress = r.primal - after;
  out.new_weights = r.active_set.weights();
  out.quadratic_correction = true;
  return true;
}

Vector normalized_nonnegative(const Vector& w) {
  Vector out = w.cwiseMax(0.0);
  return out / out.sum();
}

/// Re-solves the equalities on the support of an LP vertex; the tableau
/// answer can carry pivoting error of the size of the LP tolerance.
Vector polish(const Matrix& lhs, const Vector& rhs, const Vector& w) {
  std::vector<Index> support;
  for (Index i = 0; i < w.size(); ++i)
    if (w(i) > 0.0) support.push_back(i);
  if (support.empty()) return w;
  Matrix sub(lhs.rows(), static_cast<Index>(support.size()));
  for (std::size_t j = 0; j < support.size(); ++j) sub.col(static_cast<Index>(j)) = lhs.col(support[j]);
  const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(sub);
  Vector ws = cod.solve(rhs);
  for (int round = 0; round < 2; ++round) ws += cod.solve(rhs - sub * ws);
  if (!ws.allFinite() || ws.minCoeff() < 0.0) return w;
  if ((sub * ws - rhs).cwiseAbs().maxCoeff() > (lhs * w - rhs).cwiseAbs().maxCoeff()) return w;
  Vector out = Vector::Zero(w.size());
  for (std::size_t j = 0; j < support.size(); ++j) out(support[j]) = ws(static_cast<Index>(j));
  return out;
}

CorrectionRequest make_request(ActiveSet& active_set, const QuadraticObjective& objective, Vector& g, double& f) {
  g = objective.gradient(active_set.iterate());
  f = objective.value(active_set.iterate());
  return CorrectionRequest{active_set, objective, g, f, active_set.extreme_atoms(g)};
}

}  // namespace

AffineSystem build_affine_system(ActiveSet& active_set, const QuadraticObjective& objective) {
  if (active_set.size() < 2) throw Error(ErrorCode::SingletonActiveSet, "affine system needs two atoms");
  return assemble(gram_data(active_set, objective));
}

Vector recover_full_weights(const AffineSystem& system, const Vector& mu) {
  if (mu.size() != system.reduced_rhs.size()) {
    throw Error(ErrorCode::DimensionMismatch, "mu length differs from system size");
  }
  Vector full(mu.size() + 1);
  full(0) = 1.0 - mu.sum();
  full.tail(mu.size()) = mu;
  return full;
}

CorrectiveOutcome qc_mnp_step(const CorrectionRequest& r, const QcOptions& options) {
  const QuadraticObjective& q = require_quadratic(r.objective);
  ActiveSet& s = r.active_set;
  if (s.size() < 2) throw Error(ErrorCode::SingletonActiveSet, "QC-MNP needs two atoms");

  const AffineSystem sys = assemble(gram_data(s, q));
  const linalg::LinearSystemSolution sol = linalg::solve_symmetric_system(sys.reduced_matrix, sys.reduced_rhs);
  if (!sol.solution.allFinite()) return fallback(r);
  if (sol.rank_deficient) {
    const double rhs_inf = sys.reduced_rhs.size() ? sys.reduced_rhs.cwiseAbs().maxCoeff() : 0.0;
    const double residual = (sys.reduced_matrix * sol.solution - sys.reduced_rhs).cwiseAbs().maxCoeff();
    if (residual > options.residual_tolerance * (1.0 + rhs_inf)) return fallback(r);
  }

  const Vector target = recover_full_weights(sys, sol.solution);
  const Vector& current = s.weights();
  CorrectiveOutcome out;
  if (target.minCoeff() >= -options.negative_tolerance) {
    out.kind = CorrectionKind::FcfwAccept;
    if (!apply_if_not_worse(r, normalized_nonnegative(target), out)) return fallback(r);
    return out;
  }

  double tau = std::numeric_limits<double>::infinity();
  Vector ratio = Vector::Constant(target.size(), std::numeric_limits<double>::infinity());
  for (Index i = 0; i < target.size(); ++i) {
    if (target(i) < current(i)) {
      ratio(i) = current(i) / (current(i) - target(i));
      tau = std::min(tau, ratio(i));
    }
  }
  Vector pulled = current + tau * (target - current);
  for (Index i = 0; i < target.size(); ++i) {
    if (std::abs(ratio(i) - tau) <= options.tie_tolerance) pulled(i) = 0.0;
  }
  out.kind = CorrectionKind::Drop;
  if (!apply_if_not_worse(r, normalized_nonnegative(pulled), out)) return fallback(r);
  return out;
}

CorrectiveOutcome qc_mnp_step(ActiveSet& active_set, const QuadraticObjective& objective, const QcOptions& options) {
  Vector g;
  double f = 0.0;
  return qc_mnp_step(make_request(active_set, objective, g, f), options);
}

CorrectiveOutcome qc_lp_step(const CorrectionRequest& r, const QcOptions& options) {
  const QuadraticObjective& q = require_quadratic(r.objective);
  ActiveSet& s = r.active_set;
  if (s.size() < 2) throw Error(ErrorCode::SingletonActiveSet, "QC-LP needs two atoms");

  const GramData data = gram_data(s, q);
  const Index k = data.gram.rows();
  Matrix lhs(k, k);
  Vector rhs(k);
  for (Index i = 0; i + 1 < k; ++i) {
    lhs.row(i) = data.gram.row(i + 1) - data.gram.row(0);
    rhs(i) = -(data.linear(i + 1) - data.linear(0));
  }
  lhs.row(k - 1).setOnes();
  rhs(k - 1) = 1.0;

  const linalg::FeasibilityResult lp = linalg::solve_feasibility_lp(lhs, rhs, options.lp);
  if (!lp.feasible()) return fallback(r);

  const Vector w = normalized_nonnegative(polish(lhs, rhs, lp.solution));
  Vector x = Vector::Zero(s.dimension());
  for (std::size_t i = 0; i < s.size(); ++i) s.atom(i).add_to(x, w(static_cast<Index>(i)));
  const Vector g = q.gradient(x);
  const double anchor = s.atom(0).dot(g);
  double residual = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) residual = std::max(residual, std::abs(s.atom(i).dot(g) - anchor));
  if (residual > options.stationarity_tolerance * (1.0 + g.lpNorm<Eigen::Infinity>())) return fallback(r);

  CorrectiveOutcome out;
  out.kind = CorrectionKind::FcfwAccept;
  if (!apply_if_not_worse(r, w, out)) return fallback(r);
  return out;
}

CorrectiveOutcome qc_lp_step(ActiveSet& active_set, const QuadraticObjective& objective, const QcOptions& options) {
  Vector g;
  double f = 0.0;
  return qc_lp_step(make_request(active_set, objective, g, f), options);
}

HybridCorrector::HybridCorrector(QcSchedule schedule, QcVariant variant, bool qc_at_start, QcOptions options)
    : schedule_(schedule), variant_(variant), qc_at_start_(qc_at_start), options_(options) {
  if (schedule_.interval_N < 1) throw Error(ErrorCode::InvalidArgument, "QC interval must be at least 1");
}

void HybridCorrector::reset(const ActiveSet& active_set) {
  baseline_ = active_set.atoms_added_total();
}

std::size_t HybridCorrector::atoms_since_last_qc(const ActiveSet& active_set) const {
  const std::uint64_t total = active_set.atoms_added_total();
  return total > baseline_ ? static_cast<std::size_t>(total - baseline_) : 0;
}

bool HybridCorrector::eligible(const ActiveSet& active_set, const Objective& objective,
                               std::size_t phase_iteration) const {
  return objective.as_quadratic() != nullptr && phase_iteration >= schedule_.warmup_iterations &&
         active_set.size() >= std::max<std::size_t>(2, schedule_.min_active_set);
}

bool HybridCorrector::wants_initial_correction(const ActiveSet& active_set, const Objective& objective,
                                               std::size_t phase_iteration) const {
  return qc_at_start_ && eligible(active_set, objective, phase_iteration);
}

CorrectiveOutcome HybridCorrector::correct(const CorrectionRequest& r) {
  const bool due = r.initial || atoms_since_last_qc(r.active_set) >= schedule_.interval_N;
  if (!due || !eligible(r.active_set, r.objective, r.phase_iteration)) {
    return pairwise_local_step(r.active_set, r.objective, r.gradient, r.primal, r.extremes);
  }
  ++qc_invocations_;
  CorrectiveOutcome out = variant_ == QcVariant::Lp ? qc_lp_step(r, options_) : qc_mnp_step(r, options_);
  if (out.kind == CorrectionKind::PairwiseFallback) ++qc_fallbacks_;
  baseline_ = r.active_set.atoms_added_total();
  return out;
}

std::unique_ptr<Corrector> hybrid_corrector(QcSchedule schedule, QcVariant variant, bool qc_at_start) {
  return std::make_unique<HybridCorrector>(schedule, variant, qc_at_start);
}

}  // namespace cfw
