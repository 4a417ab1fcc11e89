#pragma once

#include "cfw/lmo.hpp"

namespace fixture {

// conv(columns) as a feasible region; minimize scans the columns.
class VertexListOracle final : public cfw::LinearMinimizationOracle {
 public:
  explicit VertexListOracle(cfw::Matrix vertices) : v_(std::move(vertices)) {}
  cfw::Index dimension() const override { return v_.rows(); }
  cfw::Atom minimize(const cfw::Vector& d) const override {
    cfw::Index best = 0;
    (v_.transpose() * d).minCoeff(&best);
    return cfw::Atom::dense(v_.col(best));
  }
  double diameter_sq_upper_bound() const override {
    double out = 0.0;
    for (cfw::Index i = 0; i < v_.cols(); ++i)
      for (cfw::Index j = 0; j < i; ++j) out = std::max(out, (v_.col(i) - v_.col(j)).squaredNorm());
    return out;
  }
  bool contains(const cfw::Vector& p, double tol) const override {
    for (cfw::Index i = 0; i < v_.cols(); ++i)
      if ((v_.col(i) - p).norm() <= tol) return true;
    return false;
  }

 private:
  cfw::Matrix v_;
};

}  // namespace fixture
