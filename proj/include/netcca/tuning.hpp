#pragma once

// V-fold cross-validated cross-search over (tauX, tauY). The score of a pair
// is the gap between the mean absolute training and held-out canonical
// correlations of the first component.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "netcca/scca.hpp"

namespace netcca {

enum class TuningMode { kOnce, kPerIteration };
std::string_view to_string(TuningMode mode);
TuningMode parseTuningMode(std::string_view text);

struct CvPlan {
  int folds = 5;
  std::vector<double> tauXGrid;
  std::vector<double> tauYGrid;
  std::uint64_t seed = 0;
  std::vector<int> foldAssignment;  // fold id in [0, folds) per sample
  int threads = 1;                  // workers for grid points

  // Builds the seeded assignment for n samples.
  static CvPlan make(Index n, int folds, std::uint64_t seed, std::vector<double> tauXGrid,
                     std::vector<double> tauYGrid);
  void validate(Index n) const;
};

// Seeded random partition: sample i goes to fold (position of i in a
// permutation) mod folds, so fold sizes differ by at most one.
std::vector<int> assignFolds(Index n, int folds, std::uint64_t seed);

struct FoldOutcome {
  int fold = 0;
  double rhoTrain = 0.0;
  double rhoTest = 0.0;
  bool trivial = false;
  bool failed = false;
  std::string message;
};

struct CvPoint {
  double tauX = 0.0;
  double tauY = 0.0;
  double score = 0.0;
  bool degenerate = false;  // fewer than half the surviving folds gave a nonzero fit
  int phase = 0;            // 1: tauX scan, 2: tauY scan
  std::vector<FoldOutcome> folds;
};

struct CvResult {
  std::vector<CvPoint> points;  // each evaluated pair once, in evaluation order
  double tauX = 0.0;
  double tauY = 0.0;
  std::vector<std::string> warnings;
};

// Full evaluation of one pair, with per-fold correlations.
CvPoint cvEvaluate(const DataMatrix& x, const DataMatrix& y, const FeatureGraph& gx,
                   const FeatureGraph& gy, const FitConfig& cfg, double tauX, double tauY,
                   const CvPlan& plan);

// | mean_v |rho_train,v| - mean_v |rho_test,v| | over folds with a nonzero fit.
double cvScore(const DataMatrix& x, const DataMatrix& y, const FeatureGraph& gx,
               const FeatureGraph& gy, const FitConfig& cfg, double tauX, double tauY,
               const CvPlan& plan);

// Chooses among evaluated points: lowest score among non-degenerate ones,
// ties to the larger tau on the scanned side. Returns -1 if all degenerate.
int argminScore(const std::vector<CvPoint>& points, bool scanX);

// Phase 1 fixes tauY at the middle of its grid (lower median) and scans
// tauX; phase 2 fixes the chosen tauX and scans tauY. Throws
// kAllDegenerate if every point in a phase is degenerate.
CvResult crossSearch(const DataMatrix& x, const DataMatrix& y, const FeatureGraph& gx,
                     const FeatureGraph& gy, const FitConfig& cfg, const CvPlan& plan);

struct TauGrids {
  std::vector<double> x;
  std::vector<double> y;
};

// tau_max = || subproblem rhs at the initial vectors ||_inf, the smallest tau
// at which zero is feasible (hence optimal). Geometric grid from
// 0.01 tau_max to tau_max. Throws kDegenerateGrid when tau_max = 0.
std::vector<double> defaultTauGrid(double tauMax, int size);
TauGrids defaultTauGrids(const DataMatrix& x, const DataMatrix& y, const NonsparseTriple& init,
                         ConstraintVariant variant, int size);
TauGrids defaultTauGrids(const DataMatrix& x, const DataMatrix& y, ConstraintVariant variant,
                         int size);

// Selector that reruns the cross-search at every outer iteration, scoring
// one alternation step from the current state on each fold.
TauSelector perIterationSelector(const FeatureGraph& gx, const FeatureGraph& gy,
                                 const FitConfig& cfg, const CvPlan& plan,
                                 std::vector<std::pair<double, double>>* trace = nullptr);

}  // namespace netcca
