#include "cfw/lmo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cfw/error.hpp"

namespace cfw {

namespace {

void require_nonempty(const Vector& d) {
  if (d.size() == 0) throw Error(ErrorCode::InvalidArgument, "direction must be non-empty");
}

void require_positive(double r, const char* what) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be positive and finite");
  }
}

void require_dimension(const Vector& d, Index n) {
  if (d.size() != n) throw Error(ErrorCode::DimensionMismatch, "direction has wrong length");
}

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

}  // namespace

Atom lmo_simplex(const Vector& direction) {
  require_nonempty(direction);
  require_finite(direction, "direction");
  Index best = 0;
  for (Index i = 1; i < direction.size(); ++i) {
    if (direction(i) < direction(best)) best = i;
  }
  return Atom::sparse(direction.size(), {{best, 1.0}});
}

Atom lmo_l1_ball(const Vector& direction, double radius) {
  require_nonempty(direction);
  require_finite(direction, "direction");
  require_positive(radius, "radius");
  Index best = 0;
  for (Index i = 1; i < direction.size(); ++i) {
    if (std::abs(direction(i)) > std::abs(direction(best))) best = i;
  }
  return Atom::sparse(direction.size(), {{best, -radius * sign_of(direction(best))}});
}

Atom lmo_ksparse(const Vector& direction, Index k, double tau) {
  require_finite(direction, "direction");
  require_positive(tau, "tau");
  const Index n = direction.size();
  if (k < 1 || k > n) {
    throw Error(ErrorCode::InvalidK, "k must lie in [1, n]");
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](Index a, Index b) {
    const double da = std::abs(direction(a)), db = std::abs(direction(b));
    return da != db ? da > db : a < b;
  });
  std::vector<std::pair<Index, double>> entries;
  entries.reserve(static_cast<std::size_t>(k));
  for (Index j = 0; j < k; ++j) {
    const Index i = order[static_cast<std::size_t>(j)];
    entries.emplace_back(i, -tau * sign_of(direction(i)));
  }
  return Atom::sparse(n, std::move(entries));
}

std::vector<Index> hungarian_assignment(const Matrix& cost) {
  if (cost.rows() != cost.cols()) {
    throw Error(ErrorCode::NotSquare, "assignment cost matrix must be square");
  }
  require_finite(cost, "assignment cost");
  const Index n = cost.rows();
  const double inf = std::numeric_limits<double>::infinity();
  const auto sz = static_cast<std::size_t>(n + 1);
  // Potentials u (rows) and v (columns); p[j] is the row matched to column j,
  // all 1-based with column 0 as the augmenting root.
  std::vector<double> u(sz, 0.0), v(sz, 0.0), minv(sz);
  std::vector<Index> p(sz, 0), way(sz, 0);
  std::vector<char> used(sz);
  for (Index i = 1; i <= n; ++i) {
    p[0] = i;
    Index j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const Index i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= n; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        if (used[ju]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[ju];
        if (cur < minv[ju]) {
          minv[ju] = cur;
          way[ju] = j0;
        }
        if (minv[ju] < delta) {
          delta = minv[ju];
          j1 = j;
        }
      }
      for (Index j = 0; j <= n; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        if (used[ju]) {
          u[static_cast<std::size_t>(p[ju])] += delta;
          v[ju] -= delta;
        } else {
          minv[ju] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const Index j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<Index> assignment(static_cast<std::size_t>(n));
  for (Index j = 1; j <= n; ++j) {
    assignment[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  }
  return assignment;
}

Atom lmo_birkhoff(const Matrix& direction) {
  const std::vector<Index> assignment = hungarian_assignment(direction);
  const Index n = direction.rows();
  std::vector<std::pair<Index, double>> entries;
  entries.reserve(assignment.size());
  for (Index i = 0; i < n; ++i) entries.emplace_back(i * n + assignment[static_cast<std::size_t>(i)], 1.0);
  return Atom::sparse(n * n, std::move(entries));
}

Atom lmo_l2_ball(const Vector& direction, const Vector& center, double radius) {
  require_finite(direction, "direction");
  require_finite(center, "center");
  require_positive(radius, "radius");
  require_dimension(direction, center.size());
  const double norm = direction.norm();
  if (norm <= 1e-14) return Atom::dense(center);
  return Atom::dense(center - (radius / norm) * direction);
}

Atom lmo_box(const Vector& direction, const Vector& lower, const Vector& upper) {
  require_finite(direction, "direction");
  require_dimension(direction, lower.size());
  Vector v(direction.size());
  for (Index i = 0; i < direction.size(); ++i) v(i) = direction(i) < 0.0 ? upper(i) : lower(i);
  return Atom::dense(std::move(v));
}

SimplexOracle::SimplexOracle(Index n) : n_(n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "simplex dimension must be positive");
}

Atom SimplexOracle::minimize(const Vector& direction) const {
  require_dimension(direction, n_);
  return lmo_simplex(direction);
}

bool SimplexOracle::contains(const Vector& p, double tol) const {
  return p.size() == n_ && p.minCoeff() >= -tol && std::abs(p.sum() - 1.0) <= tol;
}

L1BallOracle::L1BallOracle(Index n, double radius) : n_(n), radius_(radius) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  require_positive(radius, "radius");
}

Atom L1BallOracle::minimize(const Vector& direction) const {
  require_dimension(direction, n_);
  return lmo_l1_ball(direction, radius_);
}

bool L1BallOracle::contains(const Vector& p, double tol) const {
  return p.size() == n_ && p.lpNorm<1>() <= radius_ + tol;
}

KSparseOracle::KSparseOracle(Index n, Index k, double tau) : n_(n), k_(k), tau_(tau) {
  if (k < 1 || k > n) throw Error(ErrorCode::InvalidK, "k must lie in [1, n]");
  require_positive(tau, "tau");
}

Atom KSparseOracle::minimize(const Vector& direction) const {
  require_dimension(direction, n_);
  return lmo_ksparse(direction, k_, tau_);
}

bool KSparseOracle::contains(const Vector& p, double tol) const {
  return p.size() == n_ && p.cwiseAbs().maxCoeff() <= tau_ + tol &&
         p.lpNorm<1>() <= tau_ * static_cast<double>(k_) + tol;
}

BirkhoffOracle::BirkhoffOracle(Index n) : n_(n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "Birkhoff side must be positive");
}

Atom BirkhoffOracle::minimize(const Vector& direction) const {
  require_dimension(direction, n_ * n_);
  const Matrix cost = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      direction.data(), n_, n_);
  return lmo_birkhoff(cost);
}

bool BirkhoffOracle::contains(const Vector& p, double tol) const {
  if (p.size() != n_ * n_ || p.minCoeff() < -tol) return false;
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> x(p.data(), n_, n_);
  return ((x.rowwise().sum().array() - 1.0).abs() <= tol).all() &&
         ((x.colwise().sum().array() - 1.0).abs() <= tol).all();
}

L2BallOracle::L2BallOracle(Vector center, double radius) : center_(std::move(center)), radius_(radius) {
  require_finite(center_, "center");
  require_positive(radius, "radius");
}

Atom L2BallOracle::minimize(const Vector& direction) const {
  return lmo_l2_ball(direction, center_, radius_);
}

bool L2BallOracle::contains(const Vector& p, double tol) const {
  return p.size() == center_.size() && (p - center_).norm() <= radius_ + tol;
}

BoxOracle::BoxOracle(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "box bounds differ in length");
  }
  require_finite(lower_, "lower bound");
  require_finite(upper_, "upper bound");
  if ((lower_.array() > upper_.array()).any()) {
    throw Error(ErrorCode::InvalidArgument, "box lower bound exceeds upper bound");
  }
}

Atom BoxOracle::minimize(const Vector& direction) const {
  return lmo_box(direction, lower_, upper_);
}

bool BoxOracle::contains(const Vector& p, double tol) const {
  return p.size() == lower_.size() && (p.array() >= lower_.array() - tol).all() &&
         (p.array() <= upper_.array() + tol).all();
}

ProductOracle::ProductOracle(std::vector<LmoPtr> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw Error(ErrorCode::InvalidArgument, "product needs at least one block");
  for (const auto& b : blocks_) {
    if (!b) throw Error(ErrorCode::InvalidArgument, "null block oracle");
    offsets_.push_back(dimension_);
    dimension_ += b->dimension();
  }
}

Atom ProductOracle::minimize(const Vector& direction) const {
  require_dimension(direction, dimension_);
  std::vector<std::pair<Index, double>> entries;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const Index off = offsets_[i];
    const Atom a = blocks_[i]->minimize(direction.segment(off, blocks_[i]->dimension()));
    if (a.is_sparse()) {
      for (std::size_t k = 0; k < a.indices().size(); ++k) entries.emplace_back(off + a.indices()[k], a.values()[k]);
    } else {
      const Vector& d = a.dense_coordinates();
      for (Index j = 0; j < d.size(); ++j) entries.emplace_back(off + j, d(j));
    }
  }
  return Atom::sparse(dimension_, std::move(entries));
}

double ProductOracle::diameter_sq_upper_bound() const {
  double total = 0.0;
  for (const auto& b : blocks_) total += b->diameter_sq_upper_bound();
  return total;
}

bool ProductOracle::contains(const Vector& p, double tol) const {
  if (p.size() != dimension_) return false;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (!blocks_[i]->contains(p.segment(offsets_[i], blocks_[i]->dimension()), tol)) return false;
  }
  return true;
}

Vector sample_feasible_point(const LinearMinimizationOracle& lmo, std::mt19937_64& rng, int atoms) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  Vector point = Vector::Zero(lmo.dimension());
  double total = 0.0;
  std::vector<double> weights;
  std::vector<Atom> drawn;
  for (int k = 0; k < std::max(atoms, 1); ++k) {
    Vector d(lmo.dimension());
    for (Index i = 0; i < d.size(); ++i) d(i) = normal(rng);
    drawn.push_back(lmo.minimize(d));
    weights.push_back(expo(rng));
    total += weights.back();
  }
  for (std::size_t k = 0; k < drawn.size(); ++k) drawn[k].add_to(point, weights[k] / total);
  return point;
}

}  // namespace cfw
