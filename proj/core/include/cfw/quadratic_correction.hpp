#pragma once

#include <cstddef>
#include <memory>

#include "cfw/frank_wolfe.hpp"
#include "cfw/linalg.hpp"

namespace cfw {

/// Stationarity of f on the affine hull of S, written in the coordinates
/// mu_i = lambda_{i+1} with atom 0 as anchor.
struct AffineSystem {
  Matrix reduced_matrix;
  Vector reduced_rhs;
  std::size_t anchor_index = 0;
};

AffineSystem build_affine_system(ActiveSet& active_set, const QuadraticObjective& objective);

/// (1 - sum(mu), mu).
Vector recover_full_weights(const AffineSystem& system, const Vector& mu);

struct QcOptions {
  double negative_tolerance = 1e-12;
  double tie_tolerance = 1e-12;
  /// Rank-deficient solves are rejected above residual_tolerance * (1 + ||rhs||_inf).
  double residual_tolerance = 1e-6;
  /// QC-LP answers must be stationary on the affine hull to this, relative
  /// to 1 + ||grad f||_inf.
  double stationarity_tolerance = 1e-8;
  linalg::FeasibilityOptions lp;
};

CorrectiveOutcome qc_mnp_step(const CorrectionRequest& request, const QcOptions& options = {});
CorrectiveOutcome qc_mnp_step(ActiveSet& active_set, const QuadraticObjective& objective,
                              const QcOptions& options = {});

CorrectiveOutcome qc_lp_step(const CorrectionRequest& request, const QcOptions& options = {});
CorrectiveOutcome qc_lp_step(ActiveSet& active_set, const QuadraticObjective& objective,
                             const QcOptions& options = {});

struct QcSchedule {
  /// A correction runs once this many atoms were added since the last one.
  std::size_t interval_N = 1;
  /// Corrections are disabled while the phase iteration is below this.
  std::size_t warmup_iterations = 0;
  std::size_t min_active_set = 2;
};

enum class QcVariant { Lp, Mnp };

/// Local pairwise steps with a quadratic correction every N new atoms.
/// Non-quadratic objectives always get pairwise steps.
class HybridCorrector final : public Corrector {
 public:
  HybridCorrector(QcSchedule schedule, QcVariant variant, bool qc_at_start = false, QcOptions options = {});

  CorrectiveOutcome correct(const CorrectionRequest& request) override;
  void reset(const ActiveSet& active_set) override;
  bool wants_initial_correction(const ActiveSet& active_set, const Objective& objective,
                                std::size_t phase_iteration) const override;

  std::size_t atoms_since_last_qc(const ActiveSet& active_set) const;
  std::size_t qc_invocations() const noexcept { return qc_invocations_; }
  std::size_t qc_fallbacks() const noexcept { return qc_fallbacks_; }

 private:
  bool eligible(const ActiveSet& active_set, const Objective& objective, std::size_t phase_iteration) const;

  QcSchedule schedule_;
  QcVariant variant_;
  bool qc_at_start_;
  QcOptions options_;
  std::uint64_t baseline_ = 0;
  std::size_t qc_invocations_ = 0;
  std::size_t qc_fallbacks_ = 0;
};

std::unique_ptr<Corrector> hybrid_corrector(QcSchedule schedule, QcVariant variant, bool qc_at_start = false);

}  // namespace cfw
