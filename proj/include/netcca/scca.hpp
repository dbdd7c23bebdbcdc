#pragma once

// Structured sparse CCA: alternating l_inf-constrained penalty minimization
// for one canonical pair, and deflation across components.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "netcca/graph.hpp"
#include "netcca/linalg.hpp"
#include "netcca/penalty.hpp"
#include "netcca/solver.hpp"

namespace netcca {

// Coefficients with magnitude above this count as selected.
inline constexpr double kSelectionThreshold = 1e-8;

struct FitConfig {
  PenaltyConfig penalty;
  double tauX = 0.0;
  double tauY = 0.0;
  int maxOuterIterations = 20;
  double convergenceTol = 1e-4;
  int components = 1;
  SolverSettings solver;

  // Checks ranges; with data dimensions also checks K <= min(n - 1, p, q).
  void validate() const;
  void validate(Index n, Index p, Index q) const;
};

struct CcaComponent {
  Vector alpha;  // unit l2 norm or all zero
  Vector beta;
  double rho = 0.0;
  int iterations = 0;
  bool converged = false;
  bool trivial = false;
  std::vector<double> rhoTrace;  // rho after every outer iteration
};

struct CcaModel {
  std::vector<CcaComponent> components;
  FitConfig config;
  std::vector<std::vector<Index>> selectedX;
  std::vector<std::vector<Index>> selectedY;
  std::vector<std::string> warnings;
};

// Current state of the outer loop, handed to a tau selector.
struct OuterState {
  const DataMatrix* x = nullptr;
  const DataMatrix* y = nullptr;
  Vector alpha;
  Vector beta;
  double rho = 0.0;
  int iteration = 0;  // 1-based outer iteration about to run
};

// Returns (tauX, tauY) to use for the next outer iteration. Used to reselect
// the tuning parameters inside the loop instead of fixing them up front.
using TauSelector = std::function<std::pair<double, double>(const OuterState&)>;

// Pearson correlation of X alpha and Y beta; 0 if either has zero variance.
double canonicalCorrelation(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Matrix>& y,
                            const Eigen::Ref<const Vector>& alpha,
                            const Eigen::Ref<const Vector>& beta);

// Indices with |v_i| > kSelectionThreshold.
std::vector<Index> selectedIndices(const Eigen::Ref<const Vector>& v);

CcaComponent fitComponent(const DataMatrix& x, const DataMatrix& y, const FeatureGraph& gx,
                          const FeatureGraph& gy, const FitConfig& cfg,
                          const NonsparseTriple& init, const TauSelector& selector = {});

CcaModel fit(const DataMatrix& x, const DataMatrix& y, const FeatureGraph& gx,
             const FeatureGraph& gy, const FitConfig& cfg, const TauSelector& selector = {});

// Right-hand side of the alpha-subproblem given beta: S_xy beta (variant A)
// or S~xx^{-1} S_xy beta (variant B). Swap the arguments for the beta side.
Vector subproblemRhs(const DataMatrix& x, const DataMatrix& y, const RegCovOperator& opX,
                     ConstraintVariant variant, const Eigen::Ref<const Vector>& beta);

}  // namespace netcca
