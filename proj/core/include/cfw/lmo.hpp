#pragma once

#include <memory>
#include <random>
#include <vector>

#include "cfw/atom.hpp"
#include "cfw/types.hpp"

namespace cfw {

/// Ties are broken towards the lowest index in every oracle below.
Atom lmo_simplex(const Vector& direction);
/// sign(0) counts as +1.
Atom lmo_l1_ball(const Vector& direction, double radius);
Atom lmo_ksparse(const Vector& direction, Index k, double tau);
/// Permutation matrix flattened row-major (entry (i, j) at i * n + j).
Atom lmo_birkhoff(const Matrix& direction);
Atom lmo_l2_ball(const Vector& direction, const Vector& center, double radius);
Atom lmo_box(const Vector& direction, const Vector& lower, const Vector& upper);

/// Minimum-cost perfect assignment; result[i] is the column given to row i.
std::vector<Index> hungarian_assignment(const Matrix& cost);

class LinearMinimizationOracle {
 public:
  virtual ~LinearMinimizationOracle() = default;

  virtual Index dimension() const = 0;
  virtual Atom minimize(const Vector& direction) const = 0;
  virtual double diameter_sq_upper_bound() const = 0;
  /// Membership test with absolute tolerance.
  virtual bool contains(const Vector& point, double tolerance) const = 0;
};

using LmoPtr = std::shared_ptr<const LinearMinimizationOracle>;

class SimplexOracle final : public LinearMinimizationOracle {
 public:
  explicit SimplexOracle(Index n);
  Index dimension() const override { return n_; }
  Atom minimize(const Vector& direction) const override;
  double diameter_sq_upper_bound() const override { return 2.0; }
  bool contains(const Vector& point, double tolerance) const override;

 private:
  Index n_;
};

class L1BallOracle final : public LinearMinimizationOracle {
 public:
  L1BallOracle(Index n, double radius);
  Index dimension() const override { return n_; }
  Atom minimize(const Vector& direction) const override;
  double diameter_sq_upper_bound() const override { return 4.0 * radius_ * radius_; }
  bool contains(const Vector& point, double tolerance) const override;
  double radius() const noexcept { return radius_; }

 private:
  Index n_;
  double radius_;
};

/// B_1(tau * k) intersected with B_inf(tau).
class KSparseOracle final : public LinearMinimizationOracle {
 public:
  KSparseOracle(Index n, Index k, double tau);
  Index dimension() const override { return n_; }
  Atom minimize(const Vector& direction) const override;
  double diameter_sq_upper_bound() const override {
    return 4.0 * tau_ * tau_ * static_cast<double>(k_);
  }
  bool contains(const Vector& point, double tolerance) const override;

 private:
  Index n_;
  Index k_;
  double tau_;
};

/// Doubly stochastic n x n matrices, flattened row-major.
class BirkhoffOracle final : public LinearMinimizationOracle {
 public:
  explicit BirkhoffOracle(Index n);
  Index dimension() const override { return n_ * n_; }
  Index side() const noexcept { return n_; }
  Atom minimize(const Vector& direction) const override;
  double diameter_sq_upper_bound() const override { return 2.0 * static_cast<double>(n_); }
  bool contains(const Vector& point, double tolerance) const override;

 private:
  Index n_;
};

class L2BallOracle final : public LinearMinimizationOracle {
 public:
  L2BallOracle(Vector center, double radius);
  Index dimension() const override { return center_.size(); }
  Atom minimize(const Vector& direction) const override;
  double diameter_sq_upper_bound() const override { return 4.0 * radius_ * radius_; }
  bool contains(const Vector& point, double tolerance) const override;
  const Vector& center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }

 private:
  Vector center_;
  double radius_;
};

class BoxOracle final : public LinearMinimizationOracle {
 public:
  BoxOracle(Vector lower, Vector upper);
  Index dimension() const override { return lower_.size(); }
  Atom minimize(const Vector& direction) const override;
  double diameter_sq_upper_bound() const override { return (upper_ - lower_).squaredNorm(); }
  bool contains(const Vector& point, double tolerance) const override;
  const Vector& lower() const noexcept { return lower_; }
  const Vector& upper() const noexcept { return upper_; }

 private:
  Vector lower_;
  Vector upper_;
};

/// Cartesian product; directions and atoms are block concatenations.
class ProductOracle final : public LinearMinimizationOracle {
 public:
  explicit ProductOracle(std::vector<LmoPtr> blocks);
  Index dimension() const override { return dimension_; }
  Atom minimize(const Vector& direction) const override;
  double diameter_sq_upper_bound() const override;
  bool contains(const Vector& point, double tolerance) const override;

  std::size_t block_count() const noexcept { return blocks_.size(); }
  const LinearMinimizationOracle& block(std::size_t i) const { return *blocks_.at(i); }
  Index offset(std::size_t i) const { return offsets_.at(i); }

 private:
  std::vector<LmoPtr> blocks_;
  std::vector<Index> offsets_;
  Index dimension_ = 0;
};

/// Random convex combination of oracle outputs for Gaussian directions.
Vector sample_feasible_point(const LinearMinimizationOracle& lmo, std::mt19937_64& rng, int atoms = 5);

}  // namespace cfw
