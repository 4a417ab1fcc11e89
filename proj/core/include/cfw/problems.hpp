#pragma once

#include <cstdint>
#include <memory>
#include <random>

#include "cfw/lmo.hpp"
#include "cfw/objectives.hpp"
#include "cfw/splitting.hpp"

/// Seeded instance generators. Every draw goes through one std::mt19937_64
/// seeded with the given value, in a fixed order.
namespace cfw {

using Rng = std::mt19937_64;

struct KSparseRegression {
  std::shared_ptr<const QuadraticObjective> objective;
  std::shared_ptr<const KSparseOracle> lmo;
  Matrix design;
  Vector response;
};

/// ||A x - y||^2 over the K-sparse polytope with standard normal A (m x n) and y.
KSparseRegression gen_ksparse_regression(Index n, Index m, Index k, double tau, std::uint64_t seed);

struct BirkhoffProjection {
  std::shared_ptr<const QuadraticObjective> objective;
  std::shared_ptr<const BirkhoffOracle> lmo;
  Matrix target;
};

/// (1/n^2) ||X - X0||_F^2 over the Birkhoff polytope, X0 uniform(0, 1).
BirkhoffProjection gen_birkhoff_projection(Index n, std::uint64_t seed);

/// ceil(-n ln(1 - q)).
Index birkhoff_ball_sample_count(Index n, double q);

struct SplitBirkhoffBall {
  SplitProblem problem;
  std::shared_ptr<const BirkhoffOracle> birkhoff;
  std::shared_ptr<const L2BallOracle> ball;
  Matrix target;
  Index sampled_vertices = 0;
};

/// Birkhoff polytope and an l2 ball of radius r centered at vbar - c dbar/||dbar||,
/// where vbar and dbar average the LMO answers for uniform(0, 1) directions and
/// those directions. Two blocks with weights 1/2 and f(Xbar) = (1/n^2)||Xbar - X0||^2.
SplitBirkhoffBall gen_split_birkhoff_ball(Index n, double c, double q, double r, std::uint64_t seed);

struct LogisticProblem {
  std::shared_ptr<const LogisticObjective> objective;
  std::shared_ptr<const L1BallOracle> lmo;
  Vector planted_model;
  Index flipped_labels = 0;
};

/// Standard normal features, labels sign(<w, z>) for a standard normal planted
/// w with exactly round(m / 10) flips; redrawn until the positive share is in
/// [0.3, 0.7]. l1 ball feasible region.
LogisticProblem gen_logistic_synthetic(Index n, Index m, std::uint64_t seed, double radius = 1.0);

struct RandomSimplexQuadratic {
  std::shared_ptr<const QuadraticObjective> objective;
  std::shared_ptr<const SimplexOracle> lmo;
};

/// f(x) = 1/2 x^T A x + b^T x with A = B^T B / n + mu I, standard normal B and
/// b = z / n for standard normal z.
RandomSimplexQuadratic gen_simplex_quadratic(Index n, std::uint64_t seed, double mu = 0.0);

Matrix standard_normal_matrix(Index rows, Index cols, Rng& rng);
Vector standard_normal_vector(Index n, Rng& rng);

}  // namespace cfw
