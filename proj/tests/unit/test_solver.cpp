#include <doctest.h>

#include <cmath>

#include "netcca/solver.hpp"
#include "support.hpp"

using namespace netcca;
using netcca::testing::randomSubproblem;
using netcca::testing::randomVector;

TEST_CASE("zero-feasible program returns the origin") {
  const FeatureGraph g = FeatureGraph::build(3, {{0, 1}});
  Vector rhs(3);
  rhs << 0.1, -0.2, 0.05;
  const PenaltyConfig cfg;
  const ConvexProgram program =
      compileSubproblem(cfg, g, {rhs, ConstraintOperator::scaledIdentity(3, 0.8), 0.5});
  const Solution s = solve(program);
  CHECK(s.status == SolveStatus::kOptimal);
  CHECK(s.objective == 0.0);
  CHECK(s.primal.isZero());
  CHECK(referenceSolve(program).objective == 0.0);
}

TEST_CASE("hand-solved LP vertex") {
  // min 0.5 |x0 - x1| with x0 in [1, 2], x1 in [3, 4]: unique optimum (2, 3).
  const FeatureGraph g = FeatureGraph::build(2, {{0, 1}}, WeightRule::unit());
  Vector rhs(2);
  rhs << 1.5, 3.5;
  const PenaltyConfig cfg{PenaltyFamily::kFused, ConstraintVariant::kB, 0.5, 2.0};
  const ConvexProgram program =
      compileSubproblem(cfg, g, {rhs, ConstraintOperator::scaledIdentity(2, 1.0), 0.5});
  const Solution ref = referenceSolve(program);
  CHECK(ref.primal(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(ref.primal(1) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(ref.objective == doctest::Approx(0.5).epsilon(1e-12));

  const Solution s = solve(program);
  REQUIRE(s.status == SolveStatus::kOptimal);
  CHECK(std::abs(s.primal(0) - 2.0) < 1e-6);
  CHECK(std::abs(s.primal(1) - 3.0) < 1e-6);
  CHECK(std::abs(s.objective - 0.5) < 1e-6);
}

TEST_CASE("reference solver refuses large programs") {
  const auto big = randomSubproblem(PenaltyFamily::kFused, ConstraintVariant::kB, 30, 3, 1);
  try {
    referenceSolve(big.program);
    FAIL("expected TooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTooLarge);
  }
}

TEST_CASE("fused LP agrees with the simplex oracle") {
  for (auto variant : {ConstraintVariant::kB, ConstraintVariant::kA}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto inst = randomSubproblem(PenaltyFamily::kFused, variant, 8, 3, 100 + seed);
      const Solution ref = referenceSolve(inst.program);
      const Solution s = solve(inst.program);
      REQUIRE(s.status == SolveStatus::kOptimal);
      CHECK(std::abs(s.objective - ref.objective) <= 1e-6);
      CHECK(inst.program.constraintViolation(s.primal) <= 1e-6);
    }
  }
}

TEST_CASE("grouped cone program agrees with the subgradient oracle") {
  for (auto variant : {ConstraintVariant::kB, ConstraintVariant::kA}) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const auto inst = randomSubproblem(PenaltyFamily::kGrouped, variant, 6, 2, 200 + seed);
      const Solution ref = referenceSolve(inst.program);
      const Solution s = solve(inst.program);
      REQUIRE(s.status == SolveStatus::kOptimal);
      CHECK(std::abs(s.objective - ref.objective) <= 1e-4);
    }
  }
}

TEST_CASE("subgradient oracle agrees with simplex on LPs") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto inst = randomSubproblem(PenaltyFamily::kFused, ConstraintVariant::kB, 6, 3, 300 + seed);
    const Solution a = reference::simplexSolve(inst.program);
    const Solution b = reference::subgradientSolve(inst.program);
    CHECK(std::abs(a.objective - b.objective) <= 1e-4);
  }
}

TEST_CASE("optimal value is nonincreasing in tau") {
  for (auto family : {PenaltyFamily::kFused, PenaltyFamily::kGrouped}) {
    const auto inst = randomSubproblem(family, ConstraintVariant::kA, 40, 25, 77);
    const PenaltyConfig cfg{family, ConstraintVariant::kA, 0.5, 2.0};
    double previous = std::numeric_limits<double>::infinity();
    const double tauMax = inst.data.rhs.lpNorm<Eigen::Infinity>();
    for (int step = 0; step <= 8; ++step) {
      ConstraintData cd = inst.data;
      cd.tau = tauMax * step / 8.0;
      const ConvexProgram program = compileSubproblem(cfg, inst.graph, cd);
      const Solution s = solve(program);
      REQUIRE(s.status == SolveStatus::kOptimal);
      CHECK(program.constraintViolation(s.primal) <= 1e-6 * (1.0 + tauMax));
      CHECK(s.objective <= previous + 1e-6);
      previous = s.objective;
    }
    CHECK(previous == 0.0);
  }
}

TEST_CASE("fused LP objective scales with rhs and tau") {
  const auto inst = randomSubproblem(PenaltyFamily::kFused, ConstraintVariant::kB, 10, 4, 91);
  const PenaltyConfig cfg{PenaltyFamily::kFused, ConstraintVariant::kB, 0.5, 2.0};
  const Solution base = solve(compileSubproblem(cfg, inst.graph, inst.data));
  for (double c : {0.3, 2.5}) {
    ConstraintData cd = inst.data;
    cd.rhs *= c;
    cd.tau *= c;
    const Solution scaled = solve(compileSubproblem(cfg, inst.graph, cd));
    CHECK(std::abs(scaled.objective - c * base.objective) <= 1e-6 * (1.0 + c));
  }
}

TEST_CASE("solve is deterministic") {
  const auto inst = randomSubproblem(PenaltyFamily::kGrouped, ConstraintVariant::kA, 50, 30, 5);
  const Solution a = solve(inst.program);
  const Solution b = solve(inst.program);
  CHECK(a.iterations == b.iterations);
  CHECK(a.primal == b.primal);
}

TEST_CASE("warm start reaches the same optimum") {
  const auto inst = randomSubproblem(PenaltyFamily::kFused, ConstraintVariant::kB, 60, 40, 6);
  const Solution cold = solve(inst.program);
  const Solution warm = solve(inst.program, {}, &cold.primal);
  CHECK(std::abs(cold.objective - warm.objective) < 1e-6);
}

TEST_CASE("negative tau and zero scale are infeasible") {
  const FeatureGraph g = FeatureGraph::build(2, {{0, 1}});
  ConvexProgram program = compileSubproblem(
      PenaltyConfig{}, g, {Vector::Ones(2), ConstraintOperator::scaledIdentity(2, 1.0), 0.1});
  program.lower(0) = 2.0;  // lower > upper, as a leaked negative tau would give
  CHECK(solve(program).status == SolveStatus::kInfeasible);

  const ConvexProgram zeroScale = compileSubproblem(
      PenaltyConfig{}, g, {Vector::Ones(2), ConstraintOperator::scaledIdentity(2, 0.0), 0.1});
  CHECK(solve(zeroScale).status == SolveStatus::kInfeasible);
}

TEST_CASE("max iterations reports the best iterate") {
  const auto inst = randomSubproblem(PenaltyFamily::kFused, ConstraintVariant::kA, 30, 20, 8);
  SolverSettings settings;
  settings.maxIterations = 3;
  const Solution s = solve(inst.program, settings);
  CHECK(s.status == SolveStatus::kMaxIterations);
  CHECK(s.primal.size() == 30);
  CHECK(std::isfinite(s.objective));
}
