#include <doctest.h>

#include <cmath>
#include <random>

#include "netcca/penalty.hpp"
#include "netcca/solver.hpp"
#include "support.hpp"

using namespace netcca;
using netcca::testing::boxSubgradientMinimum;
using netcca::testing::randomVector;
using netcca::testing::uniform;

namespace {

FeatureGraph randomGraph(std::size_t p, int edges, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> node(0, p - 1);
  std::vector<Edge> list;
  for (int e = 0; e < edges; ++e) {
    const std::size_t a = node(rng);
    const std::size_t b = node(rng);
    if (a != b) list.emplace_back(a, b);
  }
  return FeatureGraph::build(p, list);
}

ConstraintData boxData(const Vector& rhs, double tau) {
  return {rhs, ConstraintOperator::scaledIdentity(rhs.size(), 1.0), tau};
}

}  // namespace

TEST_CASE("grouped penalty hand values") {
  const FeatureGraph edge = FeatureGraph::build(2, {{0, 1}}, WeightRule::unit());
  CHECK(groupedPenaltyValue(Vector::Zero(2), edge, 0.5, 2.0) == 0.0);
  Vector v(2);
  v << 3, 4;
  CHECK(groupedPenaltyValue(v, edge, 0.5, 2.0) == doctest::Approx(2.5).epsilon(1e-14));

  const FeatureGraph g = FeatureGraph::build(4, {{0, 1}});
  Vector s(4);
  s << 0, 0, 2, -3;
  CHECK(groupedPenaltyValue(s, g, 0.5, 2.0) == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("fused penalty hand values") {
  const FeatureGraph g = FeatureGraph::build(3, {{0, 1}}, WeightRule::unit());
  Vector v(3);
  v << 2, 0, 3;
  CHECK(fusedPenaltyValue(v, g, 0.5) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(fusedPenaltyValue(Vector::Zero(3), g, 0.5) == 0.0);

  // v_i / w_i constant across each connected component, singletons zero.
  const FeatureGraph star = FeatureGraph::build(7, {{0, 1}, {0, 2}, {0, 3}, {4, 5}});
  Vector flat(7);
  flat << 3 * 0.7, 0.7, 0.7, 0.7, -0.2, -0.2, 0.0;
  CHECK(std::abs(fusedPenaltyValue(flat, star, 0.3)) < 1e-15);
}

TEST_CASE("penalties are convex and absolutely homogeneous") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t p = 6 + static_cast<std::size_t>(trial % 5);
    const FeatureGraph g = randomGraph(p, 5, rng);
    const double eta = uniform(rng, 0.0, 0.95);
    const Vector u = randomVector(static_cast<Index>(p), 1000 + trial);
    const Vector v = randomVector(static_cast<Index>(p), 2000 + trial);
    const double t = uniform(rng, 0.0, 1.0);
    const double c = uniform(rng, -3.0, 3.0);
    for (auto family : {PenaltyFamily::kFused, PenaltyFamily::kGrouped}) {
      const PenaltyConfig cfg{family, ConstraintVariant::kB, eta, 2.0};
      const double mix = penaltyValue(cfg, t * u + (1 - t) * v, g);
      CHECK(mix <= t * penaltyValue(cfg, u, g) + (1 - t) * penaltyValue(cfg, v, g) + 1e-10);
      CHECK(std::abs(penaltyValue(cfg, c * u, g) - std::abs(c) * penaltyValue(cfg, u, g)) <
            1e-10);
    }
    // gamma other than 2 is still a norm
    const double gamma = uniform(rng, 1.1, 4.0);
    CHECK(groupedPenaltyValue(t * u + (1 - t) * v, g, eta, gamma) <=
          t * groupedPenaltyValue(u, g, eta, gamma) +
              (1 - t) * groupedPenaltyValue(v, g, eta, gamma) + 1e-10);
  }
}

TEST_CASE("grouped penalty with gamma = 1 separates over disjoint edges") {
  // Disjoint edges, unit weights: each node is in one edge, no singletons.
  const FeatureGraph g = FeatureGraph::build(6, {{0, 1}, {2, 3}, {4, 5}}, WeightRule::unit());
  const Vector v = randomVector(6, 5);
  CHECK(groupedPenaltyValue(v, g, 0.4, 1.0) ==
        doctest::Approx(0.6 * v.cwiseAbs().sum()).epsilon(1e-12));
}

TEST_CASE("compiled objective equals the closed-form penalty") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const FeatureGraph g = randomGraph(9, 6, rng);
    const Vector rhs = randomVector(9, 300 + trial);
    for (auto family : {PenaltyFamily::kFused, PenaltyFamily::kGrouped}) {
      const PenaltyConfig cfg{family, ConstraintVariant::kB, 0.35, 2.0};
      const ConvexProgram program = compileSubproblem(cfg, g, boxData(rhs, 0.3));
      // feasible point: the box centre
      const Vector v = rhs;
      CHECK(program.constraintViolation(v) == 0.0);
      CHECK(std::abs(program.objective(v) - penaltyValue(cfg, v, g)) < 1e-10);
      const Vector lifted = program.lift(v);
      CHECK(std::abs(program.linearObjective().dot(lifted) - penaltyValue(cfg, v, g)) < 1e-10);
      CHECK(program.objective(v) >= 0.0);
      if (family == PenaltyFamily::kFused) {
        CHECK(program.isLinear());
        CHECK(program.variableCount() == 9 + 2 * program.absBlockCount());
      } else {
        CHECK(program.coneBlockCount() == static_cast<Index>(g.edgeCount()));
        for (const ConeBlock& cone : program.coneBlocks()) {
          const double t = lifted(cone.output);
          CHECK(t == doctest::Approx(std::hypot(v(cone.first) * cone.scaleFirst,
                                                v(cone.second) * cone.scaleSecond)));
        }
      }
    }
  }
}

TEST_CASE("compile rejects gamma != 2 for the grouped family") {
  const FeatureGraph g = FeatureGraph::build(3, {{0, 1}});
  const PenaltyConfig cfg{PenaltyFamily::kGrouped, ConstraintVariant::kB, 0.5, 3.0};
  CHECK_THROWS_AS(compileSubproblem(cfg, g, boxData(Vector::Ones(3), 0.1)), Error);
  CHECK_THROWS_AS((PenaltyConfig{PenaltyFamily::kFused, ConstraintVariant::kB, 1.0, 2.0}.validate()),
                  Error);
}

TEST_CASE("fused program without edges is a weighted l1 problem") {
  const FeatureGraph g = FeatureGraph::empty(5);
  Vector rhs(5);
  rhs << 1.0, -0.2, 0.5, -2.0, 0.05;
  const PenaltyConfig cfg{PenaltyFamily::kFused, ConstraintVariant::kB, 0.5, 2.0};
  const ConvexProgram program = compileSubproblem(cfg, g, boxData(rhs, 0.3));
  CHECK(program.blocks.size() == 5);
  // min 0.5 |v|_1 over the box [rhs - 0.3, rhs + 0.3]: soft-threshold of rhs
  const Solution s = solve(program);
  REQUIRE(s.status == SolveStatus::kOptimal);
  Vector expected(5);
  expected << 0.7, 0.0, 0.2, -1.7, 0.0;
  CHECK((s.primal - expected).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(s.objective == doctest::Approx(0.5 * expected.cwiseAbs().sum()).epsilon(1e-6));
}

TEST_CASE("large tau makes zero feasible and optimal") {
  const FeatureGraph g = FeatureGraph::build(4, {{0, 1}, {1, 2}});
  const Vector rhs = randomVector(4, 8);
  const double tau = rhs.lpNorm<Eigen::Infinity>();
  const PenaltyConfig cfg{PenaltyFamily::kGrouped, ConstraintVariant::kB, 0.5, 2.0};
  const ConvexProgram program = compileSubproblem(cfg, g, boxData(rhs, tau));
  CHECK(program.zeroIsFeasible());
  const Solution s = solve(program);
  CHECK(s.objective == 0.0);
  CHECK(s.primal.isZero());
}

TEST_CASE("compiled fused optimum matches a direct subgradient oracle (p=8)") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 3; ++trial) {
    const FeatureGraph g = FeatureGraph::build(8, {{0, 1}, {1, 2}, {4, 5}});
    const Vector rhs = randomVector(8, 500 + trial);
    const double tau = 0.25;
    const PenaltyConfig cfg{PenaltyFamily::kFused, ConstraintVariant::kB, 0.5, 2.0};
    const ConvexProgram program = compileSubproblem(cfg, g, boxData(rhs, tau));
    const Solution s = solve(program);
    REQUIRE(s.status == SolveStatus::kOptimal);
    const Vector lo = rhs.array() - tau;
    const Vector hi = rhs.array() + tau;
    const double oracle = boxSubgradientMinimum(cfg, g, lo, hi);
    CHECK(std::abs(s.objective - oracle) < 1e-6);
  }
}
