#pragma once

// Shared helpers for the test suites: seeded random data and dense oracles
// that recompute quantities the library obtains through reduced routes.

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include <algorithm>

#include <Eigen/Dense>

#include "netcca/linalg.hpp"
#include "netcca/penalty.hpp"

namespace netcca::testing {

inline Matrix randomMatrix(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

inline Vector randomVector(Index size, std::uint64_t seed) {
  return randomMatrix(size, 1, seed).col(0);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// S + ridge I formed densely.
inline Matrix denseRegCov(const DataMatrix& x) {
  const Index n = x.rows();
  const Index p = x.cols();
  const Matrix s = x.values.transpose() * x.values / static_cast<double>(n - 1);
  return s + ridgeConstant(p, n) * Matrix::Identity(p, p);
}

// A^power for symmetric positive definite A via a dense eigendecomposition.
inline Matrix denseSymmetricPower(const Matrix& a, double power) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  const Vector values = eig.eigenvalues().array().pow(power);
  return eig.eigenvectors() * values.asDiagonal() * eig.eigenvectors().transpose();
}

inline double maxAbsDiff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// A subgradient of the closed-form penalty (grouped uses gamma = 2).
inline Vector penaltySubgradient(const PenaltyConfig& cfg, const FeatureGraph& g,
                                 const Vector& v) {
  Vector grad = Vector::Zero(v.size());
  for (const auto& [ui, uj] : g.edges) {
    const auto i = static_cast<Index>(ui);
    const auto j = static_cast<Index>(uj);
    const double wi = g.weights[ui];
    const double wj = g.weights[uj];
    if (cfg.family == PenaltyFamily::kFused) {
      const double d = v(i) / wi - v(j) / wj;
      const double s = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
      grad(i) += (1.0 - cfg.eta) * s / wi;
      grad(j) -= (1.0 - cfg.eta) * s / wj;
    } else {
      const double norm = std::sqrt(v(i) * v(i) / wi + v(j) * v(j) / wj);
      if (norm > 0.0) {
        grad(i) += (1.0 - cfg.eta) * v(i) / (wi * norm);
        grad(j) += (1.0 - cfg.eta) * v(j) / (wj * norm);
      }
    }
  }
  for (std::size_t i = 0; i < g.nodeCount; ++i) {
    if (g.degrees[i] != 0) continue;
    const double x = v(static_cast<Index>(i));
    grad(static_cast<Index>(i)) += cfg.eta * (x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0));
  }
  return grad;
}

// Restarted projected subgradient on min penalty(v) s.t. lo <= v <= hi,
// evaluated purely through the closed-form penalty. Returns the best value.
inline double boxSubgradientMinimum(const PenaltyConfig& cfg, const FeatureGraph& g,
                                    const Vector& lo, const Vector& hi,
                                    long iterations = 1'000'000) {
  Vector best = Vector::Zero(lo.size()).cwiseMax(lo).cwiseMin(hi);
  double bestValue = penaltyValue(cfg, best, g);
  double step = std::max(1e-3, (hi - lo).maxCoeff());
  step = std::max(step, best.lpNorm<Eigen::Infinity>());
  const int stages = 25;
  const long perStage = iterations / stages;
  for (int stage = 0; stage < stages; ++stage) {
    Vector v = best;
    for (long t = 0; t < perStage; ++t) {
      const Vector grad = penaltySubgradient(cfg, g, v);
      const double norm = grad.norm();
      if (norm == 0.0) break;
      v -= (step / std::sqrt(1.0 + static_cast<double>(t))) * grad / norm;
      v = v.cwiseMax(lo).cwiseMin(hi);
      const double value = penaltyValue(cfg, v, g);
      if (value < bestValue) {
        bestValue = value;
        best = v;
      }
    }
    step *= 0.5;
  }
  return bestValue;
}

struct RandomSubproblem {
  FeatureGraph graph;
  ConstraintData data;
  ConvexProgram program;
};

// A seeded alpha-subproblem: rhs ~ N(0, 1), tau a random fraction of
// ||rhs||_inf, operator rho * I (variant B) or rho * S~ from random data
// (variant A). Edges are drawn at random among the first `networkNodes`.
inline RandomSubproblem randomSubproblem(PenaltyFamily family, ConstraintVariant variant,
                                         Index p, int edges, std::uint64_t seed,
                                         Index networkNodes = -1) {
  std::mt19937_64 rng(seed);
  if (networkNodes < 0) networkNodes = p;
  std::uniform_int_distribution<std::size_t> node(0, static_cast<std::size_t>(networkNodes - 1));
  std::vector<Edge> list;
  while (static_cast<int>(list.size()) < edges) {
    const std::size_t a = node(rng);
    const std::size_t b = node(rng);
    if (a == b) continue;
    const Edge e{std::min(a, b), std::max(a, b)};
    if (std::find(list.begin(), list.end(), e) == list.end()) list.push_back(e);
  }
  RandomSubproblem out;
  out.graph = FeatureGraph::build(static_cast<std::size_t>(p), list);
  const double rho = uniform(rng, 0.4, 0.95);
  const Vector rhs = randomVector(p, seed * 7 + 1);
  const double tau = uniform(rng, 0.05, 0.8) * rhs.lpNorm<Eigen::Infinity>();
  if (variant == ConstraintVariant::kB) {
    out.data = {rhs, ConstraintOperator::scaledIdentity(p, rho), tau};
  } else {
    const Index n = 6 + static_cast<Index>(rng() % 10);
    auto cov = std::make_shared<RegCovOperator>(standardize(randomMatrix(n, p, seed * 7 + 2)));
    out.data = {rhs, ConstraintOperator::scaledCovariance(cov, rho), tau};
  }
  const PenaltyConfig cfg{family, variant, uniform(rng, 0.2, 0.8), 2.0};
  out.program = compileSubproblem(cfg, out.graph, out.data);
  return out;
}

}  // namespace netcca::testing
