#pragma once

#include <string_view>

#include "netcca/penalty.hpp"

namespace netcca {

struct SolverSettings {
  double tolerance = 1e-7;  // relative primal/dual residual target
  int maxIterations = 50000;
  int verbosity = 0;        // > 0 prints residuals to stderr every `verbosity` iterations
  double relaxation = 1.5;  // over-relaxation parameter

  void validate() const;
};

enum class SolveStatus { kOptimal, kMaxIterations, kInfeasible };
std::string_view to_string(SolveStatus status);

struct Solution {
  Vector primal;  // original variables v
  double objective = 0.0;
  SolveStatus status = SolveStatus::kOptimal;
  double kktResidual = 0.0;
  int iterations = 0;
};

// Operator-splitting (ADMM) solve of a compiled subproblem. `warmStart`, when
// given, seeds the primal iterate. Deterministic for fixed inputs.
Solution solve(const ConvexProgram& program, const SolverSettings& settings = {},
               const Vector* warmStart = nullptr);

// Independent small-instance oracle: dense two-phase simplex for linear
// programs, restarted projected subgradient (1e6 steps) for cone programs.
// Throws kTooLarge when the lifted program has more than 40 variables.
Solution referenceSolve(const ConvexProgram& program);

namespace reference {

inline constexpr Index kMaxVariables = 40;

// Dense simplex on the lifted LP; throws kInvalidArgument for cone programs.
Solution simplexSolve(const ConvexProgram& program);

// Projected subgradient in the coordinates y = op(v), where the feasible set
// is the box [lower, upper]. Works for any program with invertible op.
Solution subgradientSolve(const ConvexProgram& program, long iterations = 1'000'000);

}  // namespace reference

}  // namespace netcca
