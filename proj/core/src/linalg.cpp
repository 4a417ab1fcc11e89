#include "cfw/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "cfw/error.hpp"

namespace cfw::linalg {

namespace {

LinearSystemSolution min_norm_solution(const Matrix& m, const Vector& rhs, double threshold) {
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
  cod.setThreshold(threshold);
  cod.compute(m);
  LinearSystemSolution out;
  out.solution = cod.solve(rhs);
  out.rank_deficient = true;
  return out;
}

}  // namespace

LinearSystemSolution solve_symmetric_system(const Matrix& m, const Vector& rhs,
                                            const SymmetricSolveOptions& options) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::NotSquare, "system matrix must be square");
  }
  if (rhs.size() != m.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "right-hand side length differs from matrix size");
  }
  require_finite(m, "system matrix");
  require_finite(rhs, "right-hand side");

  const Index n = m.rows();
  const double scale = n == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
  if (n > 0 && (m - m.transpose()).cwiseAbs().maxCoeff() > options.symmetry_tolerance * std::max(scale, 1e-300)) {
    throw Error(ErrorCode::NotSymmetric, "system matrix is not symmetric");
  }

  LinearSystemSolution out;
  if (n == 0) {
    out.solution = Vector(0);
    return out;
  }
  if (scale == 0.0) {
    out.solution = Vector::Zero(n);
    out.rank_deficient = true;
    out.residual_norm = rhs.norm();
    return out;
  }

  const double pivot_floor = options.pivot_threshold * scale;
  Eigen::LDLT<Matrix> ldlt(m);
  bool deficient = ldlt.info() != Eigen::Success;
  if (!deficient) {
    const Vector d = ldlt.vectorD();
    deficient = (d.cwiseAbs().array() <= pivot_floor).any();
  }

  std::function<Vector(const Vector&)> solve;
  if (deficient) {
    out = min_norm_solution(m, rhs, options.pivot_threshold);
    solve = [&](const Vector& r) { return min_norm_solution(m, r, options.pivot_threshold).solution; };
  } else {
    out.solution = ldlt.solve(rhs);
    solve = [&](const Vector& r) { return Vector(ldlt.solve(r)); };
    const double residual = (m * out.solution - rhs).norm();
    if (!std::isfinite(residual) || residual > 1e-8 * (1.0 + rhs.norm())) {
      auto cod = std::make_shared<Eigen::CompleteOrthogonalDecomposition<Matrix>>(m);
      out.solution = cod->solve(rhs);
      solve = [cod](const Vector& r) { return Vector(cod->solve(r)); };
    }
  }
  // Iterative refinement.
  double residual = (m * out.solution - rhs).norm();
  for (int round = 0; round < options.refinement_rounds && residual > 0.0; ++round) {
    const Vector candidate = out.solution + solve(rhs - m * out.solution);
    const double r = (m * candidate - rhs).norm();
    if (!(r < residual)) break;
    out.solution = candidate;
    residual = r;
  }
  out.residual_norm = residual;
  return out;
}

FeasibilityResult solve_feasibility_lp(const Matrix& eq_lhs, const Vector& eq_rhs,
                                       const FeasibilityOptions& options) {
  if (eq_rhs.size() != eq_lhs.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "constraint count differs from rhs length");
  }
  require_finite(eq_lhs, "constraint matrix");
  require_finite(eq_rhs, "constraint rhs");
  if (options.tolerance < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "feasibility tolerance must be nonnegative");
  }

  const Index rows = eq_lhs.rows();
  const Index vars = eq_lhs.cols();
  FeasibilityResult result;
  result.solution = Vector::Zero(vars);

  // Tableau [A | I | b] with every row normalized to a nonnegative rhs.
  Matrix tab(rows, vars + rows + 1);
  tab.setZero();
  for (Index i = 0; i < rows; ++i) {
    const double sign = eq_rhs(i) < 0.0 ? -1.0 : 1.0;
    tab.row(i).head(vars) = sign * eq_lhs.row(i);
    tab(i, vars + i) = 1.0;
    tab(i, vars + rows) = sign * eq_rhs(i);
    const double row_scale = tab.row(i).head(vars).cwiseAbs().maxCoeff();
    if (row_scale > 0.0) {
      tab.row(i).head(vars) /= row_scale;
      tab(i, vars + i) /= row_scale;
      tab(i, vars + rows) /= row_scale;
    }
  }

  std::vector<Index> basis(static_cast<std::size_t>(rows));
  for (Index i = 0; i < rows; ++i) basis[static_cast<std::size_t>(i)] = vars + i;

  // Reduced costs of the phase-I objective sum(artificial).
  Vector reduced = Vector::Zero(vars + rows);
  for (Index j = 0; j < vars; ++j) reduced(j) = -tab.col(j).sum();

  constexpr double pivot_eps = 1e-12;
  const std::size_t cap = options.iteration_factor * static_cast<std::size_t>(vars + rows);
  bool hit_cap = false;

  while (true) {
    Index entering = -1;
    for (Index j = 0; j < vars; ++j) {
      if (reduced(j) < -pivot_eps) {
        entering = j;
        break;
      }
    }
    if (entering < 0) break;
    if (result.pivots >= cap) {
      hit_cap = true;
      break;
    }

    Index leaving = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < rows; ++i) {
      const double a = tab(i, entering);
      if (a <= pivot_eps) continue;
      const double ratio = tab(i, vars + rows) / a;
      if (ratio < best_ratio ||
          (ratio == best_ratio && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leaving)])) {
        best_ratio = ratio;
        leaving = i;
      }
    }
    if (leaving < 0) break;  // unbounded direction cannot occur in phase I

    tab.row(leaving) /= tab(leaving, entering);
    for (Index i = 0; i < rows; ++i) {
      if (i == leaving) continue;
      const double f = tab(i, entering);
      if (f != 0.0) tab.row(i) -= f * tab.row(leaving);
    }
    const double rf = reduced(entering);
    reduced -= rf * tab.row(leaving).head(vars + rows).transpose();
    basis[static_cast<std::size_t>(leaving)] = entering;
    ++result.pivots;
  }

  double phase_one = 0.0;
  std::vector<Index> basic_vars;
  for (Index i = 0; i < rows; ++i) {
    const Index b = basis[static_cast<std::size_t>(i)];
    if (b >= vars) {
      phase_one += std::max(0.0, tab(i, vars + rows));
    } else {
      basic_vars.push_back(b);
    }
  }
  result.phase_one_objective = phase_one;

  // Re-solve the basic variables against the unscaled data to shed pivot drift.
  Vector x = Vector::Zero(vars);
  if (!basic_vars.empty()) {
    Matrix basis_cols(rows, static_cast<Index>(basic_vars.size()));
    for (std::size_t k = 0; k < basic_vars.size(); ++k) basis_cols.col(static_cast<Index>(k)) = eq_lhs.col(basic_vars[k]);
    const Vector xb = basis_cols.colPivHouseholderQr().solve(eq_rhs);
    for (std::size_t k = 0; k < basic_vars.size(); ++k) x(basic_vars[k]) = xb(static_cast<Index>(k));
    for (Index i = 0; i < rows; ++i) {
      const Index b = basis[static_cast<std::size_t>(i)];
      if (b < vars && !std::isfinite(x(b))) x(b) = tab(i, vars + rows);
    }
  }
  x = x.cwiseMax(0.0);

  const double rhs_inf = rows == 0 ? 0.0 : eq_rhs.cwiseAbs().maxCoeff();
  const double bound = options.tolerance * (1.0 + rhs_inf);
  result.residual_inf = rows == 0 ? 0.0 : (eq_lhs * x - eq_rhs).cwiseAbs().maxCoeff();
  result.solution = x;
  if (hit_cap) {
    result.status = FeasibilityStatus::IterationLimit;
  } else if (result.residual_inf <= bound) {
    result.status = FeasibilityStatus::Feasible;
  } else {
    result.status = FeasibilityStatus::Infeasible;
  }
  return result;
}

}  // namespace cfw::linalg
