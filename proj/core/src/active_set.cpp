#include "cfw/active_set.hpp"

#include <algorithm>
#include <cmath>

#include "cfw/error.hpp"

namespace cfw {

namespace {

void erase_index(Matrix& m, Index k) {
  const Index n = m.rows();
  Matrix out(n - 1, n - 1);
  for (Index i = 0, oi = 0; i < n; ++i) {
    if (i == k) continue;
    for (Index j = 0, oj = 0; j < n; ++j) {
      if (j == k) continue;
      out(oi, oj++) = m(i, j);
    }
    ++oi;
  }
  m = std::move(out);
}

void erase_index(Vector& v, Index k) {
  Vector out(v.size() - 1);
  out << v.head(k), v.tail(v.size() - k - 1);
  v = std::move(out);
}

}  // namespace

ActiveSet::ActiveSet(Atom initial) {
  iterate_ = Vector::Zero(initial.dimension());
  weights_ = Vector(0);
  append(initial, 1.0);
  recompute_iterate();
}

ActiveSet::ActiveSet(std::vector<Atom> atoms, const Vector& weights) {
  if (atoms.empty()) throw Error(ErrorCode::EmptyActiveSet, "active set needs at least one atom");
  if (static_cast<Index>(atoms.size()) != weights.size()) {
    throw Error(ErrorCode::DimensionMismatch, "weight count differs from atom count");
  }
  iterate_ = Vector::Zero(atoms.front().dimension());
  weights_ = Vector(0);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].dimension() != atoms.front().dimension()) {
      throw Error(ErrorCode::DimensionMismatch, "atoms differ in dimension");
    }
    if (auto idx = find(atoms[i])) {
      throw Error(ErrorCode::InvalidArgument, "duplicate atom in active set");
    }
    append(atoms[i], 0.0);
  }
  apply_weights(weights);
  atoms_added_total_ = atoms_.size();
}

std::optional<std::size_t> ActiveSet::find(const Atom& atom) const {
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].id() == atom.id() && atoms_[i] == atom) return i;
  }
  return std::nullopt;
}

ExtremeAtoms ActiveSet::extreme_atoms(const Vector& gradient) const {
  if (atoms_.empty()) throw Error(ErrorCode::EmptyActiveSet, "active set is empty");
  ExtremeAtoms out;
  bool have_away = false;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const double d = atoms_[i].dot(gradient);
    if (i == 0 || d < out.local_fw_dot) {
      out.local_fw = i;
      out.local_fw_dot = d;
    }
    if (weights_(static_cast<Index>(i)) > 0.0 && (!have_away || d > out.away_dot)) {
      out.away = i;
      out.away_dot = d;
      have_away = true;
    }
  }
  if (!have_away) throw Error(ErrorCode::EmptyActiveSet, "no atom carries positive weight");
  return out;
}

void ActiveSet::append(const Atom& v, double weight) {
  if (!atoms_.empty() && v.dimension() != dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "atom dimension differs from active set");
  }
  atoms_.push_back(v);
  weights_.conservativeResize(weights_.size() + 1);
  weights_(weights_.size() - 1) = weight;
  ++atoms_added_total_;

  const Index n = static_cast<Index>(atoms_.size());
  if (gram_source_) {
    m_times_atom_.push_back(v.left_multiply(*gram_source_));
    gram_dense_.conservativeResize(n, n);
    for (Index i = 0; i < n; ++i) {
      const double g = atoms_[static_cast<std::size_t>(i)].dot(m_times_atom_.back());
      gram_dense_(i, n - 1) = g;
      gram_dense_(n - 1, i) = g;
    }
  }
  if (identity_cached_) {
    gram_identity_.conservativeResize(n, n);
    for (Index i = 0; i < n; ++i) {
      const double g = atoms_[static_cast<std::size_t>(i)].dot(v);
      gram_identity_(i, n - 1) = g;
      gram_identity_(n - 1, i) = g;
    }
  }
  linear_key_ = 0;
}

std::vector<std::uint64_t> ActiveSet::prune_and_resync() {
  std::vector<std::uint64_t> dropped;
  for (Index i = weights_.size() - 1; i >= 0; --i) {
    if (weights_(i) > kPruneThreshold) continue;
    dropped.push_back(atoms_[static_cast<std::size_t>(i)].id());
    atoms_.erase(atoms_.begin() + i);
    erase_index(weights_, i);
    if (gram_source_) {
      erase_index(gram_dense_, i);
      m_times_atom_.erase(m_times_atom_.begin() + i);
    }
    if (identity_cached_) erase_index(gram_identity_, i);
    linear_key_ = 0;
  }
  if (atoms_.empty()) throw Error(ErrorCode::EmptyActiveSet, "all weights were pruned");
  const double total = weights_.sum();
  if (std::abs(total - 1.0) > 1e-12) weights_ /= total;
  std::reverse(dropped.begin(), dropped.end());
  recompute_iterate();
  ++version_;
  return dropped;
}

void ActiveSet::recompute_iterate() {
  iterate_.setZero();
  for (std::size_t i = 0; i < atoms_.size(); ++i) atoms_[i].add_to(iterate_, weights_(static_cast<Index>(i)));
}

std::vector<std::uint64_t> ActiveSet::add_atom(const Atom& v, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "step size must lie in [0, 1]");
  }
  weights_ *= (1.0 - gamma);
  if (auto idx = find(v)) {
    weights_(static_cast<Index>(*idx)) += gamma;
  } else if (gamma > kPruneThreshold) {
    append(v, gamma);
  }
  return prune_and_resync();
}

std::vector<std::uint64_t> ActiveSet::transfer_weight(std::size_t from, std::size_t to, double amount) {
  if (from >= atoms_.size() || to >= atoms_.size()) {
    throw Error(ErrorCode::InvalidArgument, "atom index out of range");
  }
  const Index f = static_cast<Index>(from);
  if (!(amount >= 0.0) || amount > weights_(f)) {
    throw Error(ErrorCode::WeightValidation, "transfer amount outside [0, weight]");
  }
  if (from != to) {
    weights_(f) = amount == weights_(f) ? 0.0 : weights_(f) - amount;
    weights_(static_cast<Index>(to)) += amount;
  }
  return prune_and_resync();
}

std::vector<std::uint64_t> ActiveSet::transfer_weight(std::size_t from, const Atom& to, double amount) {
  if (auto idx = find(to)) return transfer_weight(from, *idx, amount);
  if (from >= atoms_.size()) throw Error(ErrorCode::InvalidArgument, "atom index out of range");
  const Index f = static_cast<Index>(from);
  if (!(amount >= 0.0) || amount > weights_(f)) {
    throw Error(ErrorCode::WeightValidation, "transfer amount outside [0, weight]");
  }
  if (amount > kPruneThreshold) {
    weights_(f) = amount == weights_(f) ? 0.0 : weights_(f) - amount;
    append(to, amount);
  }
  return prune_and_resync();
}

std::vector<std::uint64_t> ActiveSet::apply_weights(const Vector& new_weights) {
  if (new_weights.size() != weights_.size()) {
    throw Error(ErrorCode::WeightValidation, "weight vector length differs from active set size");
  }
  if (!new_weights.allFinite() || std::abs(new_weights.sum() - 1.0) > 1e-8 || new_weights.minCoeff() < -1e-10) {
    throw Error(ErrorCode::WeightValidation, "weights must be nonnegative and sum to one");
  }
  weights_ = new_weights.cwiseMax(0.0).cwiseMin(1.0);
  return prune_and_resync();
}

void ActiveSet::rebuild_dense_gram(const std::shared_ptr<const Matrix>& m) {
  gram_source_ = m;
  const Index n = static_cast<Index>(atoms_.size());
  m_times_atom_.clear();
  for (const Atom& a : atoms_) m_times_atom_.push_back(a.left_multiply(*m));
  gram_dense_.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i <= j; ++i) {
      const double g = atoms_[static_cast<std::size_t>(i)].dot(m_times_atom_[static_cast<std::size_t>(j)]);
      gram_dense_(i, j) = g;
      gram_dense_(j, i) = g;
    }
  }
}

void ActiveSet::rebuild_identity_gram() {
  identity_cached_ = true;
  const Index n = static_cast<Index>(atoms_.size());
  gram_identity_.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i <= j; ++i) {
      const double g = atoms_[static_cast<std::size_t>(i)].dot(atoms_[static_cast<std::size_t>(j)]);
      gram_identity_(i, j) = g;
      gram_identity_(j, i) = g;
    }
  }
}

Matrix ActiveSet::quadratic_gram(const QuadraticObjective& q) {
  if (q.dimension() != dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "objective dimension differs from active set");
  }
  const Index n = static_cast<Index>(atoms_.size());
  Matrix out = Matrix::Zero(n, n);
  if (q.dense_part() && q.dense_scale() != 0.0) {
    if (gram_source_ != q.dense_part()) rebuild_dense_gram(q.dense_part());
    out += q.dense_scale() * gram_dense_;
  }
  if (q.shift() != 0.0) {
    if (!identity_cached_) rebuild_identity_gram();
    out += q.shift() * gram_identity_;
  }
  return out;
}

Vector ActiveSet::linear_products(const QuadraticObjective& q) {
  if (q.dimension() != dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "objective dimension differs from active set");
  }
  if (linear_key_ != q.id() || linear_cache_.size() != static_cast<Index>(atoms_.size())) {
    linear_cache_.resize(static_cast<Index>(atoms_.size()));
    for (std::size_t i = 0; i < atoms_.size(); ++i) linear_cache_(static_cast<Index>(i)) = atoms_[i].dot(q.linear());
    linear_key_ = q.id();
  }
  return linear_cache_;
}

double ActiveSet::gram_cache_error(const QuadraticObjective& q) const {
  ActiveSet fresh = *this;
  fresh.gram_source_.reset();
  fresh.identity_cached_ = false;
  fresh.linear_key_ = 0;
  ActiveSet cached = *this;
  const Matrix a = cached.quadratic_gram(q);
  const Matrix b = fresh.quadratic_gram(q);
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  const double lin = (cached.linear_products(q) - fresh.linear_products(q)).cwiseAbs().maxCoeff();
  return std::max((a - b).cwiseAbs().maxCoeff() / scale, lin / std::max(1.0, q.linear().norm()));
}

}  // namespace cfw
