#pragma once

// Simulation scenarios with network-structured covariance, multivariate
// normal sampling, selection accuracy and seeded Monte-Carlo studies.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "netcca/graph.hpp"
#include "netcca/linalg.hpp"
#include "netcca/scca.hpp"
#include "netcca/tuning.hpp"

namespace netcca {

// Network layout shared by every scenario: 6 stars of one hub and 5 leaves
// over the first 36 variables of each side.
inline constexpr Index kNetworkCount = 6;
inline constexpr Index kNetworkSize = 6;
inline constexpr Index kNetworkNodes = kNetworkCount * kNetworkSize;
inline constexpr double kHubLeafCorrelation = 0.7;
inline constexpr double kLeafLeafCorrelation = 0.49;

struct ScenarioSpec {
  int id = 2;
  Index p = 100;
  Index q = 100;
  Index n = 80;
  std::uint64_t seed = 1;  // used by scenario 4's random placement

  void validate() const;
};

struct GroundTruth {
  ScenarioSpec spec;
  Matrix sigma;       // (p + q) x (p + q), X block first
  Matrix trueAlpha;   // p x K, K = 2 for scenario 3 else 1
  Matrix trueBeta;    // q x K
  Vector correlations;  // K population canonical correlations
  std::vector<std::vector<Index>> supportX;  // per component
  std::vector<std::vector<Index>> supportY;
  FeatureGraph graphX;  // prior graph handed to the fitter
  FeatureGraph graphY;
  // Scenario 4: position of original variable i after dispersal (identity
  // otherwise).
  std::vector<Index> positionX;
  std::vector<Index> positionY;

  Index p() const { return trueAlpha.rows(); }
  Index q() const { return trueBeta.rows(); }
  Matrix sigmaXX() const { return sigma.topLeftCorner(p(), p()); }
  Matrix sigmaYY() const { return sigma.bottomRightCorner(q(), q()); }
  Matrix sigmaXY() const { return sigma.topRightCorner(p(), q()); }
};

// 36 x 36 within-network covariance (before padding with identity).
Matrix networkCovariance();
// The 6-star prior graph over the first 36 of p nodes, degree weights.
FeatureGraph networkGraph(Index p);

GroundTruth buildScenario(const ScenarioSpec& spec);

// n joint draws from N(0, Sigma); returns raw (X, Y).
std::pair<Matrix, Matrix> sampleMvn(const GroundTruth& truth, Index n, std::uint64_t seed);

struct SelectionMetrics {
  Index tp = 0;
  Index fp = 0;
  Index tn = 0;
  Index fn = 0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double mcc = 0.0;
};

// Sensitivity TP/(TP+FN), specificity TN/(TN+FP) and Matthews correlation;
// any score whose denominator is zero is reported as 0.
SelectionMetrics selectionMetrics(const std::vector<Index>& selected,
                                  const std::vector<Index>& trueSupport, Index total);

struct MethodConfig {
  std::string name;
  PenaltyConfig penalty;
  bool emptyGraph = false;  // l1 ablation: drop the prior graph
};

struct StudyConfig {
  ScenarioSpec scenario;
  std::vector<MethodConfig> methods;
  int reps = 1;
  std::uint64_t seed = 1;
  int folds = 5;
  int gridSize = 8;
  int maxOuterIterations = 20;
  TuningMode tuningMode = TuningMode::kOnce;
  int threads = 1;
  int shardIndex = 0;  // this worker handles replicates r with r % shardCount == shardIndex
  int shardCount = 1;
  bool recordTiming = false;  // off keeps output byte-reproducible

  void validate() const;
};

struct ReplicateRow {
  int replicate = 0;
  std::string method;
  char side = 'X';
  int component = 1;
  SelectionMetrics metrics;
  double rhoHat = 0.0;
  double tauX = 0.0;
  double tauY = 0.0;
  std::optional<double> runtimeSeconds;
  std::string status = "ok";
};

struct SummaryRow {
  std::string method;
  char side = 'X';
  int component = 1;
  int completed = 0;
  int failed = 0;
  double meanSensitivity = 0.0;
  double sdSensitivity = 0.0;
  double meanSpecificity = 0.0;
  double sdSpecificity = 0.0;
  double meanMcc = 0.0;
  double sdMcc = 0.0;
  double meanRho = 0.0;
};

struct StudyResult {
  std::vector<ReplicateRow> rows;  // sorted by (replicate, method order, component, side)
  std::vector<SummaryRow> summary;
  int replicatesRun = 0;
  int replicatesFailed = 0;  // replicates with at least one failed method
};

// Fused variant B with the prior graph and the same penalty on the empty
// graph, the default comparison.
std::vector<MethodConfig> defaultMethods();

// Replicate seed for the data draw and the fold assignment.
std::uint64_t replicateSeed(std::uint64_t studySeed, int replicate);

// Runs one replicate for every method.
std::vector<ReplicateRow> runReplicate(const StudyConfig& cfg, const GroundTruth& truth,
                                       int replicate);

// Runs all replicates of this shard, skipping those already complete in
// `previous` (resume). `previous` rows are kept in the result.
StudyResult runStudy(const StudyConfig& cfg, const std::vector<ReplicateRow>& previous = {},
                     const std::function<void(int)>& onReplicateDone = {});

// Mean/sd aggregation over rows with status "ok", in method order of first
// appearance.
std::vector<SummaryRow> summarize(const std::vector<ReplicateRow>& rows);

// CSV serialization with 17 significant digits.
std::string replicatesCsv(const std::vector<ReplicateRow>& rows);
std::string summaryCsv(const std::vector<SummaryRow>& rows);
std::vector<ReplicateRow> parseReplicatesCsv(const std::string& text);

}  // namespace netcca
