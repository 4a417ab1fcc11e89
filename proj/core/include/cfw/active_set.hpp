#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "cfw/atom.hpp"
#include "cfw/objectives.hpp"

namespace cfw {

struct ExtremeAtoms {
  std::size_t away = 0;
  std::size_t local_fw = 0;
  double away_dot = 0.0;
  double local_fw_dot = 0.0;

  double local_gap() const noexcept { return away_dot - local_fw_dot; }
};

/// Convex-combination representation of the iterate. The iterate is rebuilt
/// from the weights after every mutation; weights at or below kPruneThreshold
/// are removed together with their atoms.
class ActiveSet {
 public:
  static constexpr double kPruneThreshold = 1e-14;

  ActiveSet() = default;
  explicit ActiveSet(Atom initial);
  ActiveSet(std::vector<Atom> atoms, const Vector& weights);

  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }
  Index dimension() const noexcept { return iterate_.size(); }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const Atom& atom(std::size_t i) const { return atoms_.at(i); }
  const Vector& weights() const noexcept { return weights_; }
  double weight(std::size_t i) const { return weights_(static_cast<Index>(i)); }
  const Vector& iterate() const noexcept { return iterate_; }

  /// Bumped on every mutation.
  std::uint64_t version() const noexcept { return version_; }
  /// Number of atoms ever appended (merges do not count).
  std::uint64_t atoms_added_total() const noexcept { return atoms_added_total_; }

  std::optional<std::size_t> find(const Atom& atom) const;

  ExtremeAtoms extreme_atoms(const Vector& gradient) const;

  /// Frank-Wolfe update: weights scaled by (1 - gamma), then gamma added to v.
  std::vector<std::uint64_t> add_atom(const Atom& v, double gamma);
  /// Moves `amount` of weight between atoms; returns ids of dropped atoms.
  std::vector<std::uint64_t> transfer_weight(std::size_t from, std::size_t to, double amount);
  std::vector<std::uint64_t> transfer_weight(std::size_t from, const Atom& to, double amount);
  /// Replaces all weights (validated, clamped, pruned); returns dropped ids.
  std::vector<std::uint64_t> apply_weights(const Vector& new_weights);

  /// Matrix of <v_i, A v_j> for the objective's A, served from the cache.
  Matrix quadratic_gram(const QuadraticObjective& q);
  /// Vector of <b, v_i>.
  Vector linear_products(const QuadraticObjective& q);
  bool gram_cache_active() const noexcept { return gram_source_ != nullptr || identity_cached_; }
  /// Largest relative deviation of the cached products from recomputation.
  double gram_cache_error(const QuadraticObjective& q) const;

 private:
  void append(const Atom& v, double weight);
  std::vector<std::uint64_t> prune_and_resync();
  void recompute_iterate();
  void rebuild_dense_gram(const std::shared_ptr<const Matrix>& m);
  void rebuild_identity_gram();

  std::vector<Atom> atoms_;
  Vector weights_;
  Vector iterate_;
  std::uint64_t version_ = 0;
  std::uint64_t atoms_added_total_ = 0;

  std::shared_ptr<const Matrix> gram_source_;
  Matrix gram_dense_;
  std::vector<Vector> m_times_atom_;
  bool identity_cached_ = false;
  Matrix gram_identity_;
  std::uint64_t linear_key_ = 0;
  Vector linear_cache_;
};

}  // namespace cfw
