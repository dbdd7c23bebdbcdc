#include "netcca/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>

#include "netcca/parallel.hpp"
#include "netcca/random.hpp"

namespace netcca {

std::string_view to_string(TuningMode mode) {
  return mode == TuningMode::kOnce ? "once" : "per-iteration";
}

TuningMode parseTuningMode(std::string_view text) {
  if (text == "once") return TuningMode::kOnce;
  if (text == "per-iteration") return TuningMode::kPerIteration;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown tuning mode '" + std::string(text) + "' (expected once|per-iteration)");
}

std::vector<int> assignFolds(Index n, int folds, std::uint64_t seed) {
  if (folds < 2) throw Error(ErrorCode::kInvalidArgument, "folds must be >= 2");
  RandomStream rng(seed);
  const auto order = rng.permutation(static_cast<std::size_t>(n));
  std::vector<int> out(static_cast<std::size_t>(n));
  for (std::size_t position = 0; position < order.size(); ++position) {
    out[order[position]] = static_cast<int>(position % static_cast<std::size_t>(folds));
  }
  return out;
}

CvPlan CvPlan::make(Index n, int folds, std::uint64_t seed, std::vector<double> tauXGrid,
                    std::vector<double> tauYGrid) {
  CvPlan plan;
  plan.folds = folds;
  plan.seed = seed;
  plan.tauXGrid = std::move(tauXGrid);
  plan.tauYGrid = std::move(tauYGrid);
  if (folds > n) {
    throw Error(ErrorCode::kInvalidArgument, "folds (" + std::to_string(folds) +
                                                 ") exceeds sample count (" + std::to_string(n) +
                                                 ")");
  }
  plan.foldAssignment = assignFolds(n, folds, seed);
  plan.validate(n);
  return plan;
}

void CvPlan::validate(Index n) const {
  if (folds < 2) throw Error(ErrorCode::kInvalidArgument, "folds must be >= 2");
  if (static_cast<Index>(foldAssignment.size()) != n) {
    throw Error(ErrorCode::kDimensionMismatch, "fold assignment length does not match n");
  }
  std::vector<int> sizes(static_cast<std::size_t>(folds), 0);
  for (int f : foldAssignment) {
    if (f < 0 || f >= folds) throw Error(ErrorCode::kInvalidArgument, "fold id out of range");
    ++sizes[static_cast<std::size_t>(f)];
  }
  for (int size : sizes) {
    if (size < 2) {
      throw Error(ErrorCode::kInvalidArgument, "every fold needs at least 2 samples (n = " +
                                                   std::to_string(n) + ", folds = " +
                                                   std::to_string(folds) + ")");
    }
  }
  for (const auto* grid : {&tauXGrid, &tauYGrid}) {
    if (grid->empty()) throw Error(ErrorCode::kInvalidArgument, "tau grids must be nonempty");
    for (std::size_t i = 0; i < grid->size(); ++i) {
      if (!((*grid)[i] >= 0.0) || !std::isfinite((*grid)[i]) ||
          (i > 0 && !((*grid)[i] > (*grid)[i - 1]))) {
        throw Error(ErrorCode::kInvalidArgument,
                    "tau grids must be finite, nonnegative and strictly increasing");
      }
    }
  }
}

namespace {

struct FoldData {
  DataMatrix trainX;
  DataMatrix trainY;
  Matrix testX;
  Matrix testY;
};

Matrix rowsOf(const Matrix& m, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = m.row(rows[i]);
  return out;
}

// Standardized sources are re-standardized on the training rows; deflated
// (already centered, non-unit-variance) sources are only re-centered, since
// deflation can leave exactly constant columns.
std::pair<DataMatrix, Matrix> splitSide(const DataMatrix& source, const std::vector<Index>& train,
                                        const std::vector<Index>& test) {
  const Matrix trainRaw = rowsOf(source.values, train);
  const Matrix testRaw = rowsOf(source.values, test);
  if (source.standardized) {
    DataMatrix fitted = standardize(trainRaw);
    Matrix applied = applyStandardization(fitted, testRaw);
    return {std::move(fitted), std::move(applied)};
  }
  DataMatrix fitted;
  fitted.columnMeans = trainRaw.colwise().mean().transpose();
  fitted.columnSds = Vector::Ones(trainRaw.cols());
  fitted.values = trainRaw.rowwise() - fitted.columnMeans.transpose();
  Matrix applied = testRaw.rowwise() - fitted.columnMeans.transpose();
  return {std::move(fitted), std::move(applied)};
}

FoldData makeFold(const DataMatrix& x, const DataMatrix& y, const std::vector<int>& assignment,
                  int fold) {
  std::vector<Index> train;
  std::vector<Index> test;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    (assignment[i] == fold ? test : train).push_back(static_cast<Index>(i));
  }
  FoldData out;
  std::tie(out.trainX, out.testX) = splitSide(x, train, test);
  std::tie(out.trainY, out.testY) = splitSide(y, train, test);
  return out;
}

// Either the fold data or the error met while building it.
struct FoldSlot {
  std::optional<FoldData> data;
  std::string error;
};

std::vector<FoldSlot> makeFolds(const DataMatrix& x, const DataMatrix& y, const CvPlan& plan) {
  std::vector<FoldSlot> out(static_cast<std::size_t>(plan.folds));
  for (int v = 0; v < plan.folds; ++v) {
    try {
      out[static_cast<std::size_t>(v)].data = makeFold(x, y, plan.foldAssignment, v);
    } catch (const Error& e) {
      out[static_cast<std::size_t>(v)].error = e.what();
    }
  }
  return out;
}

using FoldFitter =
    std::function<CcaComponent(const FoldData& fold, const FitConfig& cfg)>;

CvPoint evaluatePoint(const std::vector<FoldSlot>& folds, const FitConfig& base, double tauX,
                      double tauY, const FoldFitter& fitter) {
  CvPoint point;
  point.tauX = tauX;
  point.tauY = tauY;
  FitConfig cfg = base;
  cfg.tauX = tauX;
  cfg.tauY = tauY;
  cfg.components = 1;
  double trainSum = 0.0;
  double testSum = 0.0;
  int used = 0;
  int trivial = 0;
  for (std::size_t v = 0; v < folds.size(); ++v) {
    FoldOutcome outcome;
    outcome.fold = static_cast<int>(v);
    if (!folds[v].data) {
      outcome.failed = true;
      outcome.message = folds[v].error;
      point.folds.push_back(outcome);
      continue;
    }
    const FoldData& fold = *folds[v].data;
    try {
      const CcaComponent c = fitter(fold, cfg);
      outcome.trivial = c.trivial;
      if (!c.trivial) {
        outcome.rhoTrain = std::abs(c.rho);
        outcome.rhoTest = std::abs(canonicalCorrelation(fold.testX, fold.testY, c.alpha, c.beta));
      }
    } catch (const Error& e) {
      outcome.failed = true;
      outcome.message = e.what();
    }
    if (!outcome.failed) {
      ++used;
      if (outcome.trivial) {
        ++trivial;
      } else {
        trainSum += outcome.rhoTrain;
        testSum += outcome.rhoTest;
      }
    }
    point.folds.push_back(outcome);
  }
  // A trivial fold's (0, 0) pair mimics perfect generalization, so it is left
  // out of the averages; a point where most folds are trivial is degenerate.
  const int fitted = used - trivial;
  point.degenerate = used == 0 || 2 * fitted < used;
  point.score = fitted == 0 ? 0.0 : std::abs(trainSum / fitted - testSum / fitted);
  return point;
}

CcaComponent fullFoldFit(const FoldData& fold, const FeatureGraph& gx, const FeatureGraph& gy,
                         const FitConfig& cfg) {
  const CcaModel model = fit(fold.trainX, fold.trainY, gx, gy, cfg);
  if (model.components.empty()) {
    CcaComponent trivial;
    trivial.alpha = Vector::Zero(fold.trainX.cols());
    trivial.beta = Vector::Zero(fold.trainY.cols());
    trivial.trivial = true;
    return trivial;
  }
  return model.components.front();
}

using PointEvaluator = std::function<CvPoint(double tauX, double tauY)>;

CvResult crossSearchWith(const CvPlan& plan, const PointEvaluator& evaluate) {
  CvResult result;
  std::map<std::pair<double, double>, CvPoint> cache;
  auto runPhase = [&](const std::vector<std::pair<double, double>>& pairs, int phase) {
    std::vector<CvPoint> points(pairs.size());
    std::vector<std::size_t> missing;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      auto it = cache.find(pairs[i]);
      if (it != cache.end()) {
        points[i] = it->second;
      } else {
        missing.push_back(i);
      }
    }
    parallelFor(missing.size(), plan.threads, [&](std::size_t m) {
      const std::size_t i = missing[m];
      points[i] = evaluate(pairs[i].first, pairs[i].second);
    });
    for (std::size_t i : missing) {
      points[i].phase = phase;
      cache.emplace(std::make_pair(points[i].tauX, points[i].tauY), points[i]);
      result.points.push_back(points[i]);
    }
    return points;
  };

  const double middleY = plan.tauYGrid[(plan.tauYGrid.size() - 1) / 2];
  std::vector<std::pair<double, double>> phase1;
  for (double tx : plan.tauXGrid) phase1.emplace_back(tx, middleY);
  const auto scanX = runPhase(phase1, 1);
  const int bestX = argminScore(scanX, true);
  if (bestX < 0) {
    throw Error(ErrorCode::kAllDegenerate,
                "every tauX grid point gave a trivial (all-zero) fit; lower the grid");
  }
  result.tauX = scanX[static_cast<std::size_t>(bestX)].tauX;

  std::vector<std::pair<double, double>> phase2;
  for (double ty : plan.tauYGrid) phase2.emplace_back(result.tauX, ty);
  const auto scanY = runPhase(phase2, 2);
  const int bestY = argminScore(scanY, false);
  if (bestY < 0) {
    throw Error(ErrorCode::kAllDegenerate, "every tauY grid point gave a trivial fit");
  }
  result.tauY = scanY[static_cast<std::size_t>(bestY)].tauY;

  for (const auto& point : result.points) {
    for (const auto& fold : point.folds) {
      if (fold.failed) {
        result.warnings.push_back("fold " + std::to_string(fold.fold) + " failed at (" +
                                  std::to_string(point.tauX) + ", " + std::to_string(point.tauY) +
                                  "): " + fold.message);
      }
    }
  }
  return result;
}

}  // namespace

int argminScore(const std::vector<CvPoint>& points, bool scanX) {
  int best = -1;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const CvPoint& p = points[i];
    if (p.degenerate) continue;
    if (best < 0) {
      best = static_cast<int>(i);
      continue;
    }
    const CvPoint& b = points[static_cast<std::size_t>(best)];
    const double slack = 1e-12 * std::max(1.0, std::abs(b.score));
    const double tau = scanX ? p.tauX : p.tauY;
    const double bestTau = scanX ? b.tauX : b.tauY;
    if (p.score < b.score - slack || (p.score <= b.score + slack && tau > bestTau)) {
      best = static_cast<int>(i);
    }
  }
  return best;
}

CvPoint cvEvaluate(const DataMatrix& x, const DataMatrix& y, const FeatureGraph& gx,
                   const FeatureGraph& gy, const FitConfig& cfg, double tauX, double tauY,
                   const CvPlan& plan) {
  plan.validate(x.rows());
  const auto folds = makeFolds(x, y, plan);
  return evaluatePoint(folds, cfg, tauX, tauY, [&](const FoldData& fold, const FitConfig& c) {
    return fullFoldFit(fold, gx, gy, c);
  });
}

double cvScore(const DataMatrix& x, const DataMatrix& y, const FeatureGraph& gx,
               const FeatureGraph& gy, const FitConfig& cfg, double tauX, double tauY,
               const CvPlan& plan) {
  return cvEvaluate(x, y, gx, gy, cfg, tauX, tauY, plan).score;
}

CvResult crossSearch(const DataMatrix& x, const DataMatrix& y, const FeatureGraph& gx,
                     const FeatureGraph& gy, const FitConfig& cfg, const CvPlan& plan) {
  if (x.rows() != y.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "row count mismatch: " + std::to_string(x.rows()) +
                                                   " vs " + std::to_string(y.rows()));
  }
  plan.validate(x.rows());
  cfg.validate();
  const auto folds = makeFolds(x, y, plan);
  return crossSearchWith(plan, [&](double tauX, double tauY) {
    return evaluatePoint(folds, cfg, tauX, tauY, [&](const FoldData& fold, const FitConfig& c) {
      return fullFoldFit(fold, gx, gy, c);
    });
  });
}

std::vector<double> defaultTauGrid(double tauMax, int size) {
  if (size < 2) throw Error(ErrorCode::kInvalidArgument, "tau grid size must be >= 2");
  if (!(tauMax > 0.0) || !std::isfinite(tauMax)) {
    throw Error(ErrorCode::kDegenerateGrid,
                "tau_max is zero: the data carry no cross-covariance to fit");
  }
  std::vector<double> grid(static_cast<std::size_t>(size));
  const double low = 0.01 * tauMax;
  for (int i = 0; i < size; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(size - 1);
    grid[static_cast<std::size_t>(i)] = low * std::pow(100.0, t);
  }
  grid.front() = low;
  grid.back() = tauMax;
  return grid;
}

TauGrids defaultTauGrids(const DataMatrix& x, const DataMatrix& y, const NonsparseTriple& init,
                         ConstraintVariant variant, int size) {
  const RegCovOperator opX(x);
  const RegCovOperator opY(y);
  const double maxX = subproblemRhs(x, y, opX, variant, init.beta).lpNorm<Eigen::Infinity>();
  const double maxY = subproblemRhs(y, x, opY, variant, init.alpha).lpNorm<Eigen::Infinity>();
  return {defaultTauGrid(maxX, size), defaultTauGrid(maxY, size)};
}

TauGrids defaultTauGrids(const DataMatrix& x, const DataMatrix& y, ConstraintVariant variant,
                         int size) {
  return defaultTauGrids(x, y, nonsparseInit(x, y, 1), variant, size);
}

TauSelector perIterationSelector(const FeatureGraph& gx, const FeatureGraph& gy,
                                 const FitConfig& cfg, const CvPlan& plan,
                                 std::vector<std::pair<double, double>>* trace) {
  return [gx, gy, cfg, plan, trace](const OuterState& state) {
    const auto folds = makeFolds(*state.x, *state.y, plan);
    NonsparseTriple start{state.alpha, state.beta, state.rho};
    FitConfig oneStep = cfg;
    oneStep.maxOuterIterations = 1;
    const CvResult result = crossSearchWith(plan, [&](double tauX, double tauY) {
      return evaluatePoint(folds, oneStep, tauX, tauY,
                           [&](const FoldData& fold, const FitConfig& c) {
                             return fitComponent(fold.trainX, fold.trainY, gx, gy, c, start);
                           });
    });
    if (trace) trace->emplace_back(result.tauX, result.tauY);
    return std::make_pair(result.tauX, result.tauY);
  };
}

}  // namespace netcca
