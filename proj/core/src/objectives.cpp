#include "cfw/objectives.hpp"

#include <atomic>
#include <cmath>

#include "cfw/error.hpp"

namespace cfw {

namespace {

std::uint64_t next_objective_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

// ln(1 + exp(t)) without overflow.
double softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double sigmoid(double t) {
  if (t >= 0.0) {
    return 1.0 / (1.0 + std::exp(-t));
  }
  const double e = std::exp(t);
  return e / (1.0 + e);
}

void require_length(const Vector& x, Index n, const char* what) {
  if (x.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has wrong length");
  }
}

}  // namespace

std::optional<double> Objective::curvature_along(const Vector&, const Vector&) const {
  return std::nullopt;
}

QuadraticObjective::QuadraticObjective(Matrix a, Vector b, double c)
    : QuadraticObjective(std::make_shared<const Matrix>(std::move(a)), 1.0, 0.0, std::move(b), c) {}

QuadraticObjective::QuadraticObjective(std::shared_ptr<const Matrix> m, double dense_scale, double shift,
                                       Vector b, double c)
    : m_(std::move(m)), dense_scale_(dense_scale), shift_(shift), b_(std::move(b)), c_(c),
      id_(next_objective_id()) {
  require_finite(b_, "linear term");
  if (!std::isfinite(c_) || !std::isfinite(dense_scale_) || !std::isfinite(shift_)) {
    throw Error(ErrorCode::NonFiniteInput, "quadratic scalars must be finite");
  }
  if (m_) {
    const Matrix& m_ref = *m_;
    if (m_ref.rows() != m_ref.cols()) {
      throw Error(ErrorCode::NotSquare, "quadratic matrix must be square");
    }
    if (m_ref.rows() != b_.size()) {
      throw Error(ErrorCode::DimensionMismatch, "quadratic matrix and linear term differ in size");
    }
    require_finite(m_ref, "quadratic matrix");
    if (m_ref.size() > 0) {
      const double scale = std::max(m_ref.cwiseAbs().maxCoeff(), 1e-300);
      if ((m_ref - m_ref.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw Error(ErrorCode::NotSymmetric, "quadratic matrix must be symmetric");
      }
    }
  }
}

QuadraticObjective QuadraticObjective::scaled_identity(double shift, Vector b, double c) {
  return QuadraticObjective(nullptr, 0.0, shift, std::move(b), c);
}

Vector QuadraticObjective::apply(const Vector& v) const {
  require_length(v, dimension(), "argument");
  Vector out = shift_ * v;
  if (m_ && dense_scale_ != 0.0) out.noalias() += dense_scale_ * ((*m_) * v);
  return out;
}

Matrix QuadraticObjective::to_dense() const {
  Matrix a = shift_ * Matrix::Identity(dimension(), dimension());
  if (m_) a += dense_scale_ * (*m_);
  return a;
}

double QuadraticObjective::largest_eigenvalue() const {
  if (dimension() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(to_dense(), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

double QuadraticObjective::value(const Vector& x) const {
  require_length(x, dimension(), "point");
  return 0.5 * x.dot(apply(x)) + b_.dot(x) + c_;
}

Vector QuadraticObjective::gradient(const Vector& x) const {
  return apply(x) + b_;
}

std::optional<double> QuadraticObjective::curvature_along(const Vector&, const Vector& d) const {
  return d.dot(apply(d));
}

LogisticObjective::LogisticObjective(Matrix features, Vector labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
  if (features_.rows() == 0) {
    throw Error(ErrorCode::EmptyDataset, "logistic objective needs at least one sample");
  }
  if (labels_.size() != features_.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "label count differs from sample count");
  }
  require_finite(features_, "features");
  for (Index i = 0; i < labels_.size(); ++i) {
    if (labels_(i) != 1.0 && labels_(i) != -1.0) {
      throw Error(ErrorCode::InvalidArgument, "labels must be +1 or -1");
    }
  }
}

LogisticEvaluation LogisticObjective::evaluate(const Vector& x, bool want_hessian) const {
  require_length(x, dimension(), "point");
  require_finite(x, "point");
  const double m = static_cast<double>(samples());
  const Vector margins = features_ * x;

  LogisticEvaluation out;
  Vector weights(samples());
  Vector curvature(samples());
  double total = 0.0;
  for (Index i = 0; i < samples(); ++i) {
    const double ym = labels_(i) * margins(i);
    total += softplus(-ym);
    const double s = sigmoid(-ym);
    weights(i) = -labels_(i) * s;
    curvature(i) = s * (1.0 - s);
  }
  out.value = total / m + x.squaredNorm() / (2.0 * m);
  out.gradient = (features_.transpose() * weights + x) / m;
  if (want_hessian) {
    Matrix h = features_.transpose() * curvature.asDiagonal() * features_;
    h.diagonal().array() += 1.0;
    h /= m;
    out.hessian = std::move(h);
  }
  return out;
}

double LogisticObjective::value(const Vector& x) const {
  require_length(x, dimension(), "point");
  const double m = static_cast<double>(samples());
  const Vector margins = features_ * x;
  double total = 0.0;
  for (Index i = 0; i < samples(); ++i) total += softplus(-labels_(i) * margins(i));
  return total / m + x.squaredNorm() / (2.0 * m);
}

Vector LogisticObjective::gradient(const Vector& x) const {
  return evaluate(x, false).gradient;
}

Matrix LogisticObjective::hessian(const Vector& x) const {
  return *evaluate(x, true).hessian;
}

Vector LogisticObjective::hessian_vector(const Vector& x, const Vector& d) const {
  require_length(x, dimension(), "point");
  require_length(d, dimension(), "direction");
  const double m = static_cast<double>(samples());
  const Vector margins = features_ * x;
  Vector zd = features_ * d;
  for (Index i = 0; i < samples(); ++i) {
    const double s = sigmoid(-labels_(i) * margins(i));
    zd(i) *= s * (1.0 - s);
  }
  return (features_.transpose() * zd + d) / m;
}

std::optional<double> LogisticObjective::curvature_along(const Vector& x, const Vector& d) const {
  return d.dot(hessian_vector(x, d));
}

FunctionObjective::FunctionObjective(Index dimension, ValueFn value, GradientFn gradient, CurvatureFn curvature)
    : dimension_(dimension), value_(std::move(value)), gradient_(std::move(gradient)),
      curvature_(std::move(curvature)) {
  if (!value_ || !gradient_) {
    throw Error(ErrorCode::InvalidArgument, "value and gradient callbacks are required");
  }
}

FunctionObjective FunctionObjective::zero(Index dimension) {
  return FunctionObjective(
      dimension, [](const Vector&) { return 0.0; },
      [dimension](const Vector&) { return Vector(Vector::Zero(dimension)); },
      [](const Vector&, const Vector&) { return 0.0; });
}

std::optional<double> FunctionObjective::curvature_along(const Vector& x, const Vector& d) const {
  if (!curvature_) return std::nullopt;
  return curvature_(x, d);
}

}  // namespace cfw
