#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cfw/types.hpp"

namespace cfw {

/// An extreme point handed out by an oracle. Sparse atoms keep sorted
/// (index, value) pairs; the id hashes the nonzero entries, so a sparse and a
/// dense atom with the same coordinates share it.
class Atom {
 public:
  Atom() = default;

  static Atom dense(Vector coordinates);
  /// Entries may come unsorted; zeros are dropped and indices must be unique.
  static Atom sparse(Index dimension, std::vector<std::pair<Index, double>> entries);

  Index dimension() const noexcept { return dimension_; }
  bool is_sparse() const noexcept { return sparse_; }
  std::uint64_t id() const noexcept { return id_; }

  const std::vector<Index>& indices() const noexcept { return indices_; }
  const std::vector<double>& values() const noexcept { return values_; }
  const Vector& dense_coordinates() const noexcept { return dense_; }

  double dot(const Vector& g) const;
  double dot(const Atom& other) const;
  /// target += scale * atom
  void add_to(Vector& target, double scale = 1.0) const;
  /// M * atom, exploiting sparsity.
  Vector left_multiply(const Matrix& m) const;
  Vector to_dense() const;
  double squared_norm() const;

  friend bool operator==(const Atom& a, const Atom& b);

 private:
  void compute_id();

  Index dimension_ = 0;
  bool sparse_ = true;
  std::vector<Index> indices_;
  std::vector<double> values_;
  Vector dense_;
  std::uint64_t id_ = 0;
};

}  // namespace cfw
