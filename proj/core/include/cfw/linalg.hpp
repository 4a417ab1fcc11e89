#pragma once

#include <cstddef>

#include "cfw/types.hpp"

/// Dense kernels used by the quadratic corrections: a symmetric solver with a
/// minimum-norm fallback and a phase-I simplex for equality systems with
/// nonnegative unknowns.
namespace cfw::linalg {

struct LinearSystemSolution {
  Vector solution;
  double residual_norm = 0.0;
  /// Set when a pivot fell below the rank threshold; the solution is then the
  /// minimum-norm least-squares one.
  bool rank_deficient = false;
};

struct SymmetricSolveOptions {
  /// A pivot counts as zero when |pivot| <= pivot_threshold * max|M|.
  double pivot_threshold = 1e-11;
  double symmetry_tolerance = 1e-12;
  int refinement_rounds = 3;
};

LinearSystemSolution solve_symmetric_system(const Matrix& m, const Vector& rhs,
                                            const SymmetricSolveOptions& options = {});

enum class FeasibilityStatus { Feasible, Infeasible, IterationLimit };

struct FeasibilityOptions {
  /// Equalities must hold to tolerance * (1 + ||rhs||_inf) in the max norm.
  double tolerance = 1e-8;
  /// Pivot cap is iteration_factor * (variables + constraints).
  std::size_t iteration_factor = 50;
};

struct FeasibilityResult {
  FeasibilityStatus status = FeasibilityStatus::Infeasible;
  Vector solution;
  double phase_one_objective = 0.0;
  double residual_inf = 0.0;
  std::size_t pivots = 0;

  bool feasible() const noexcept { return status == FeasibilityStatus::Feasible; }
};

/// Finds x >= 0 with eq_lhs * x = eq_rhs using a phase-I simplex (sum of
/// artificial variables, Bland's rule). Any feasible point is acceptable.
FeasibilityResult solve_feasibility_lp(const Matrix& eq_lhs, const Vector& eq_rhs,
                                       const FeasibilityOptions& options = {});

}  // namespace cfw::linalg
