#include "cfw/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "cfw/error.hpp"

namespace cfw {

namespace {

void require_positive_count(Index v, const char* what) {
  if (v < 1) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be positive");
}

Matrix uniform_matrix(Index rows, Index cols, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = unif(rng);
  }
  return m;
}

Vector row_major(const Matrix& m) {
  Vector v(m.size());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  }
  return v;
}

std::shared_ptr<const QuadraticObjective> birkhoff_distance_objective(const Matrix& target) {
  const double n2 = static_cast<double>(target.rows() * target.rows());
  const Vector x0 = row_major(target);
  return std::make_shared<const QuadraticObjective>(
      QuadraticObjective::scaled_identity(2.0 / n2, -(2.0 / n2) * x0, x0.squaredNorm() / n2));
}

}  // namespace

Matrix standard_normal_matrix(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

Vector standard_normal_vector(Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

KSparseRegression gen_ksparse_regression(Index n, Index m, Index k, double tau, std::uint64_t seed) {
  require_positive_count(n, "n");
  require_positive_count(m, "m");
  Rng rng(seed);
  KSparseRegression out;
  out.design = standard_normal_matrix(m, n, rng);
  out.response = standard_normal_vector(m, rng);
  Matrix a = 2.0 * out.design.transpose() * out.design;
  a = 0.5 * (a + a.transpose()).eval();
  out.objective = std::make_shared<const QuadraticObjective>(
      std::move(a), Vector(-2.0 * out.design.transpose() * out.response), out.response.squaredNorm());
  out.lmo = std::make_shared<const KSparseOracle>(n, k, tau);
  return out;
}

BirkhoffProjection gen_birkhoff_projection(Index n, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "Birkhoff side must be at least 2");
  Rng rng(seed);
  BirkhoffProjection out;
  out.target = uniform_matrix(n, n, rng);
  out.objective = birkhoff_distance_objective(out.target);
  out.lmo = std::make_shared<const BirkhoffOracle>(n);
  return out;
}

Index birkhoff_ball_sample_count(Index n, double q) {
  if (!(q > 0.0 && q < 1.0)) throw Error(ErrorCode::InvalidQ, "q must lie in (0, 1)");
  return static_cast<Index>(std::ceil(-static_cast<double>(n) * std::log1p(-q)));
}

SplitBirkhoffBall gen_split_birkhoff_ball(Index n, double c, double q, double r, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "Birkhoff side must be at least 2");
  if (!(c >= 0.0) || !std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "c must be nonnegative");
  const Index samples = std::max<Index>(1, birkhoff_ball_sample_count(n, q));
  Rng rng(seed);

  SplitBirkhoffBall out;
  out.sampled_vertices = samples;
  out.target = uniform_matrix(n, n, rng);
  out.birkhoff = std::make_shared<const BirkhoffOracle>(n);

  Vector vbar = Vector::Zero(n * n);
  Vector dbar = Vector::Zero(n * n);
  for (Index s = 0; s < samples; ++s) {
    const Vector d = row_major(uniform_matrix(n, n, rng));
    out.birkhoff->minimize(d).add_to(vbar);
    dbar += d;
  }
  vbar /= static_cast<double>(samples);
  dbar /= static_cast<double>(samples);
  const Vector center = vbar - c * dbar / dbar.norm();
  out.ball = std::make_shared<const L2BallOracle>(center, r);

  out.problem.blocks = {{out.birkhoff, true}, {out.ball, false}};
  out.problem.weights = Vector::Constant(2, 0.5);
  out.problem.base_objective = birkhoff_distance_objective(out.target);
  return out;
}

LogisticProblem gen_logistic_synthetic(Index n, Index m, std::uint64_t seed, double radius) {
  require_positive_count(n, "n");
  require_positive_count(m, "m");
  Rng rng(seed);
  const Index flips = static_cast<Index>(std::llround(0.1 * static_cast<double>(m)));
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Matrix z = standard_normal_matrix(m, n, rng);
    Vector w = standard_normal_vector(n, rng);
    Vector labels(m);
    const Vector margins = z * w;
    for (Index i = 0; i < m; ++i) labels(i) = margins(i) < 0.0 ? -1.0 : 1.0;
    std::vector<Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Index{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (Index j = 0; j < flips; ++j) labels(order[static_cast<std::size_t>(j)]) *= -1.0;

    const double positive = static_cast<double>((labels.array() > 0.0).count()) / static_cast<double>(m);
    if (positive < 0.3 || positive > 0.7) continue;

    LogisticProblem out;
    out.objective = std::make_shared<const LogisticObjective>(std::move(z), std::move(labels));
    out.lmo = std::make_shared<const L1BallOracle>(n, radius);
    out.planted_model = std::move(w);
    out.flipped_labels = flips;
    return out;
  }
  throw Error(ErrorCode::InvalidArgument, "could not draw a balanced logistic instance");
}

RandomSimplexQuadratic gen_simplex_quadratic(Index n, std::uint64_t seed, double mu) {
  require_positive_count(n, "n");
  Rng rng(seed);
  const Matrix b = standard_normal_matrix(n, n, rng);
  Matrix a = b.transpose() * b / static_cast<double>(n);
  a.diagonal().array() += mu;
  a = 0.5 * (a + a.transpose()).eval();
  RandomSimplexQuadratic out;
  Vector linear = standard_normal_vector(n, rng) / static_cast<double>(n);
  out.objective = std::make_shared<const QuadraticObjective>(std::move(a), std::move(linear), 0.0);
  out.lmo = std::make_shared<const SimplexOracle>(n);
  return out;
}

}  // namespace cfw
