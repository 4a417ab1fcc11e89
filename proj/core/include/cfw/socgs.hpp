#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "cfw/frank_wolfe.hpp"
#include "cfw/quadratic_correction.hpp"

namespace cfw {

class HessianOracle {
 public:
  virtual ~HessianOracle() = default;
  virtual Matrix matrix_at(const Vector& x) const = 0;
  virtual Vector hessian_vec(const Vector& x, const Vector& d) const { return matrix_at(x) * d; }
};

class ExactLogisticHessian final : public HessianOracle {
 public:
  explicit ExactLogisticHessian(std::shared_ptr<const LogisticObjective> objective);
  Matrix matrix_at(const Vector& x) const override { return objective_->hessian(x); }
  Vector hessian_vec(const Vector& x, const Vector& d) const override { return objective_->hessian_vector(x, d); }

 private:
  std::shared_ptr<const LogisticObjective> objective_;
};

class IdentityHessian final : public HessianOracle {
 public:
  explicit IdentityHessian(Index n, double scale = 1.0) : n_(n), scale_(scale) {}
  Matrix matrix_at(const Vector&) const override { return scale_ * Matrix::Identity(n_, n_); }
  Vector hessian_vec(const Vector&, const Vector& d) const override { return scale_ * d; }

 private:
  Index n_;
  double scale_;
};

class ConstantHessian final : public HessianOracle {
 public:
  explicit ConstantHessian(Matrix h) : h_(std::move(h)) {}
  Matrix matrix_at(const Vector&) const override { return h_; }

 private:
  Matrix h_;
};

/// <grad f(x_t), x - x_t> + 1/2 ||x - x_t||_H^2 as a QuadraticObjective
/// (value 0 at x_t).
QuadraticObjective build_quadratic_model(const Objective& objective, const HessianOracle& hessian, const Vector& x_t);

struct PvmResult {
  ActiveSet active_set;
  CfwResult inner;
};

/// At most k eager corrective FW iterations on the model, warm-started from
/// a copy of `warm_start`; stops early once the model gap reaches the
/// threshold. outer_iteration drives the corrector's warmup.
PvmResult pvm_inexact_step(const QuadraticObjective& model, const LinearMinimizationOracle& lmo,
                           const ActiveSet& warm_start, std::size_t k, std::optional<double> gap_threshold,
                           Corrector& corrector, std::size_t outer_iteration);

struct SocgsParams {
  std::size_t outer_iterations = 100;
  std::size_t inner_iterations_k = 100;
  std::optional<double> inner_gap_threshold;
  std::size_t qc_warmup = 25;
  double time_limit_s = std::numeric_limits<double>::infinity();
  double fw_gap_tolerance = 1e-6;
  /// When set, the inner threshold becomes (lb(x_t) / ||grad f(x_t)||)^4.
  std::function<double(const Vector&)> lower_bound;
};

/// Hybrid corrector of the inner solves: QC at the first inner iteration and
/// after every 30 new atoms, disabled for the first qc_warmup outer iterations.
std::unique_ptr<Corrector> socgs_inner_corrector(QcVariant variant, std::size_t qc_warmup = 25);

enum class SocgsBranch { Ocs = 0, Pvm = 1 };

struct SocgsResult {
  ActiveSet active_set;
  /// fw_gap is the true gap on f; step_kind is the kind of the outer
  /// corrective step; extra1 = inner iterations, extra2 = winning branch.
  std::vector<TraceRecord> trace;
  RunStatus status = RunStatus::IterationLimit;
  std::size_t iterations = 0;
  std::uint64_t lmo_calls = 0;
  std::size_t pvm_wins = 0;
};

SocgsResult socgs_run(const Objective& objective, const HessianOracle& hessian, const LinearMinimizationOracle& lmo,
                      const Vector& start, const SocgsParams& params, Corrector& outer_corrector,
                      Corrector& inner_corrector);

}  // namespace cfw
