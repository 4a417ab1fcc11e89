#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>

#include "cfw/types.hpp"

namespace cfw {

class QuadraticObjective;

class Objective {
 public:
  virtual ~Objective() = default;

  virtual Index dimension() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;

  /// <d, Hess f(x) d> when cheaply available.
  virtual std::optional<double> curvature_along(const Vector& x, const Vector& d) const;

  virtual const QuadraticObjective* as_quadratic() const { return nullptr; }
};

/// f(x) = 1/2 <x, A x> + <b, x> + c with A = dense_scale * M + shift * I.
/// M is shared so that derived objectives (block restrictions, rescalings)
/// can reuse Gram entries cached against it.
class QuadraticObjective final : public Objective {
 public:
  QuadraticObjective(Matrix a, Vector b, double c = 0.0);
  QuadraticObjective(std::shared_ptr<const Matrix> m, double dense_scale, double shift, Vector b,
                     double c = 0.0);

  static QuadraticObjective scaled_identity(double shift, Vector b, double c = 0.0);

  Index dimension() const override { return b_.size(); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  std::optional<double> curvature_along(const Vector& x, const Vector& d) const override;
  const QuadraticObjective* as_quadratic() const override { return this; }

  Vector apply(const Vector& v) const;
  Matrix to_dense() const;
  double largest_eigenvalue() const;

  const std::shared_ptr<const Matrix>& dense_part() const noexcept { return m_; }
  double dense_scale() const noexcept { return dense_scale_; }
  double shift() const noexcept { return shift_; }
  const Vector& linear() const noexcept { return b_; }
  double constant() const noexcept { return c_; }
  /// Distinct for every constructed objective; keys the <b, v> cache.
  std::uint64_t id() const noexcept { return id_; }

 private:
  std::shared_ptr<const Matrix> m_;
  double dense_scale_ = 1.0;
  double shift_ = 0.0;
  Vector b_;
  double c_ = 0.0;
  std::uint64_t id_ = 0;
};

struct LogisticEvaluation {
  double value = 0.0;
  Vector gradient;
  std::optional<Matrix> hessian;
};

/// f(x) = (1/m) sum ln(1 + exp(-y_i <x, z_i>)) + 1/(2m) ||x||^2.
class LogisticObjective final : public Objective {
 public:
  LogisticObjective(Matrix features, Vector labels);

  Index dimension() const override { return features_.cols(); }
  Index samples() const noexcept { return features_.rows(); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  std::optional<double> curvature_along(const Vector& x, const Vector& d) const override;

  LogisticEvaluation evaluate(const Vector& x, bool want_hessian) const;
  Matrix hessian(const Vector& x) const;
  Vector hessian_vector(const Vector& x, const Vector& d) const;

  const Matrix& features() const noexcept { return features_; }
  const Vector& labels() const noexcept { return labels_; }

 private:
  Matrix features_;
  Vector labels_;
};

/// Wraps user callbacks; curvature is optional.
class FunctionObjective final : public Objective {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradientFn = std::function<Vector(const Vector&)>;
  using CurvatureFn = std::function<double(const Vector&, const Vector&)>;

  FunctionObjective(Index dimension, ValueFn value, GradientFn gradient, CurvatureFn curvature = {});

  static FunctionObjective zero(Index dimension);

  Index dimension() const override { return dimension_; }
  double value(const Vector& x) const override { return value_(x); }
  Vector gradient(const Vector& x) const override { return gradient_(x); }
  std::optional<double> curvature_along(const Vector& x, const Vector& d) const override;

 private:
  Index dimension_;
  ValueFn value_;
  GradientFn gradient_;
  CurvatureFn curvature_;
};

}  // namespace cfw
