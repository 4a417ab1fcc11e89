#include "cfw/atom.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "cfw/error.hpp"

namespace cfw {

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv_mix(std::uint64_t& h, std::uint64_t word) {
  for (int byte = 0; byte < 8; ++byte) {
    h ^= (word >> (8 * byte)) & 0xffU;
    h *= kFnvPrime;
  }
}

}  // namespace

Atom Atom::dense(Vector coordinates) {
  require_finite(coordinates, "atom");
  Atom a;
  a.dimension_ = coordinates.size();
  a.sparse_ = false;
  a.dense_ = std::move(coordinates);
  a.compute_id();
  return a;
}

Atom Atom::sparse(Index dimension, std::vector<std::pair<Index, double>> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });
  Atom a;
  a.dimension_ = dimension;
  a.sparse_ = true;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto [idx, val] = entries[k];
    if (idx < 0 || idx >= dimension) {
      throw Error(ErrorCode::DimensionMismatch, "sparse atom index out of range");
    }
    if (k > 0 && entries[k - 1].first == idx) {
      throw Error(ErrorCode::InvalidArgument, "duplicate sparse atom index " + std::to_string(idx));
    }
    if (!std::isfinite(val)) {
      throw Error(ErrorCode::NonFiniteInput, "atom contains NaN or Inf");
    }
    if (val == 0.0) continue;
    a.indices_.push_back(idx);
    a.values_.push_back(val);
  }
  a.compute_id();
  return a;
}

void Atom::compute_id() {
  std::uint64_t h = kFnvOffset;
  fnv_mix(h, static_cast<std::uint64_t>(dimension_));
  auto mix_entry = [&h](Index idx, double val) {
    if (val == 0.0) return;
    fnv_mix(h, static_cast<std::uint64_t>(idx));
    fnv_mix(h, std::bit_cast<std::uint64_t>(val));
  };
  if (sparse_) {
    for (std::size_t k = 0; k < indices_.size(); ++k) mix_entry(indices_[k], values_[k]);
  } else {
    for (Index i = 0; i < dense_.size(); ++i) mix_entry(i, dense_(i));
  }
  id_ = h;
}

double Atom::dot(const Vector& g) const {
  if (g.size() != dimension_) {
    throw Error(ErrorCode::DimensionMismatch, "atom and vector differ in dimension");
  }
  if (!sparse_) return dense_.dot(g);
  double s = 0.0;
  for (std::size_t k = 0; k < indices_.size(); ++k) s += values_[k] * g(indices_[k]);
  return s;
}

double Atom::dot(const Atom& other) const {
  if (other.dimension_ != dimension_) {
    throw Error(ErrorCode::DimensionMismatch, "atoms differ in dimension");
  }
  if (!sparse_) return other.dot(dense_);
  if (!other.sparse_) return dot(other.dense_);
  double s = 0.0;
  std::size_t i = 0, j = 0;
  while (i < indices_.size() && j < other.indices_.size()) {
    if (indices_[i] == other.indices_[j]) {
      s += values_[i++] * other.values_[j++];
    } else if (indices_[i] < other.indices_[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return s;
}

void Atom::add_to(Vector& target, double scale) const {
  if (target.size() != dimension_) {
    throw Error(ErrorCode::DimensionMismatch, "atom and target differ in dimension");
  }
  if (!sparse_) {
    target.noalias() += scale * dense_;
    return;
  }
  for (std::size_t k = 0; k < indices_.size(); ++k) target(indices_[k]) += scale * values_[k];
}

Vector Atom::left_multiply(const Matrix& m) const {
  if (m.cols() != dimension_) {
    throw Error(ErrorCode::DimensionMismatch, "matrix and atom differ in dimension");
  }
  if (!sparse_) return m * dense_;
  Vector out = Vector::Zero(m.rows());
  for (std::size_t k = 0; k < indices_.size(); ++k) out.noalias() += values_[k] * m.col(indices_[k]);
  return out;
}

Vector Atom::to_dense() const {
  if (!sparse_) return dense_;
  Vector out = Vector::Zero(dimension_);
  add_to(out);
  return out;
}

double Atom::squared_norm() const {
  if (!sparse_) return dense_.squaredNorm();
  double s = 0.0;
  for (double v : values_) s += v * v;
  return s;
}

bool operator==(const Atom& a, const Atom& b) {
  if (a.id_ != b.id_ || a.dimension_ != b.dimension_) return false;
  if (a.sparse_ && b.sparse_) return a.indices_ == b.indices_ && a.values_ == b.values_;
  return a.to_dense() == b.to_dense();
}

}  // namespace cfw
