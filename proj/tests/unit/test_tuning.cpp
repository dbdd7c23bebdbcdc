#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "netcca/tuning.hpp"
#include "support.hpp"

using namespace netcca;
using netcca::testing::randomMatrix;

namespace {

struct Pair {
  DataMatrix x;
  DataMatrix y;
};

Pair correlatedData(Index n, Index p, Index q, std::uint64_t seed) {
  const Matrix latent = randomMatrix(n, 1, seed);
  Matrix x = randomMatrix(n, p, seed + 1);
  Matrix y = randomMatrix(n, q, seed + 2);
  for (Index j = 0; j < 3; ++j) x.col(j) += 1.5 * latent.col(0);
  for (Index j = 0; j < 3; ++j) y.col(j) += 1.5 * latent.col(0);
  return {standardize(x), standardize(y)};
}

CvPoint point(double tx, double ty, double score, bool degenerate = false) {
  CvPoint p;
  p.tauX = tx;
  p.tauY = ty;
  p.score = score;
  p.degenerate = degenerate;
  return p;
}

}  // namespace

TEST_CASE("fold assignment is a balanced seeded partition") {
  for (Index n : {10, 23, 80}) {
    for (int v : {2, 3, 5}) {
      const std::vector<int> folds = assignFolds(n, v, 7);
      REQUIRE(folds.size() == static_cast<std::size_t>(n));
      std::vector<int> sizes(static_cast<std::size_t>(v), 0);
      for (int f : folds) {
        REQUIRE(f >= 0);
        REQUIRE(f < v);
        ++sizes[static_cast<std::size_t>(f)];
      }
      const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
      CHECK(*hi - *lo <= 1);
      CHECK(assignFolds(n, v, 7) == folds);
    }
  }
  CHECK(assignFolds(80, 5, 1) != assignFolds(80, 5, 2));
}

TEST_CASE("plan validation") {
  CHECK_THROWS_AS(CvPlan::make(4, 5, 1, {0.1}, {0.1}), Error);
  CvPlan plan = CvPlan::make(10, 5, 1, {0.1}, {0.1});
  CHECK_NOTHROW(plan.validate(10));
  // A fold with a single member must be rejected.
  CvPlan tiny = CvPlan::make(10, 5, 1, {0.1}, {0.1});
  for (auto& f : tiny.foldAssignment) f = f == 4 ? 3 : f;
  tiny.foldAssignment[0] = 4;
  CHECK_THROWS_AS(tiny.validate(10), Error);
  CHECK_THROWS_AS(CvPlan::make(10, 2, 1, {0.2, 0.1}, {0.1}), Error);
}

TEST_CASE("default tau grid") {
  const std::vector<double> two = defaultTauGrid(2.0, 2);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == doctest::Approx(0.02).epsilon(1e-14));
  CHECK(two[1] == 2.0);
  const std::vector<double> grid = defaultTauGrid(3.0, 9);
  REQUIRE(grid.size() == 9);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    CHECK(grid[i] > grid[i - 1]);
    CHECK(grid[i] / grid[i - 1] == doctest::Approx(grid[1] / grid[0]).epsilon(1e-12));
  }
  CHECK(grid.front() > 0.0);
  CHECK(grid.back() == 3.0);
  try {
    defaultTauGrid(0.0, 5);
    FAIL("expected a degenerate grid");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateGrid);
  }
}

TEST_CASE("orthogonal blocks give a degenerate grid") {
  // Columns of an 8 x 8 Hadamard matrix (minus the constant one) are centered
  // and mutually orthogonal, so S_xy is exactly zero.
  Matrix h = Matrix::Ones(8, 8);
  for (Index i = 0; i < 8; ++i) {
    for (Index j = 0; j < 8; ++j) {
      if (__builtin_popcountll(static_cast<unsigned long long>(i & j)) % 2 == 1) h(i, j) = -1.0;
    }
  }
  const DataMatrix x = standardize(h.middleCols(1, 3));
  const DataMatrix y = standardize(h.middleCols(4, 3));
  CHECK(crossCovariance(x, y).cwiseAbs().maxCoeff() == 0.0);
  try {
    defaultTauGrids(x, y, ConstraintVariant::kB, 4);
    FAIL("expected a degenerate grid");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateGrid);
  }
}

TEST_CASE("argmin breaks ties toward the larger tau and skips degenerate points") {
  std::vector<CvPoint> flat = {point(0.1, 0.5, 0.2), point(0.2, 0.5, 0.2), point(0.4, 0.5, 0.2)};
  CHECK(argminScore(flat, true) == 2);
  std::vector<CvPoint> scanY = {point(0.3, 0.1, 0.2), point(0.3, 0.2, 0.2),
                                point(0.3, 0.4, 0.2, true)};
  CHECK(argminScore(scanY, false) == 1);
  std::vector<CvPoint> clear = {point(0.1, 0.5, 0.05), point(0.2, 0.5, 0.2), point(0.4, 0.5, 0.3)};
  CHECK(argminScore(clear, true) == 0);
  std::vector<CvPoint> none = {point(0.1, 0.5, 0.0, true), point(0.2, 0.5, 0.0, true)};
  CHECK(argminScore(none, true) == -1);
}

TEST_CASE("cross-search on a small problem") {
  const Pair d = correlatedData(40, 8, 6, 3);
  const FeatureGraph gx = FeatureGraph::build(8, {{0, 1}, {1, 2}});
  const FeatureGraph gy = FeatureGraph::build(6, {{0, 1}});
  FitConfig cfg;
  const TauGrids grids = defaultTauGrids(d.x, d.y, cfg.penalty.constraint, 4);
  const CvPlan plan = CvPlan::make(40, 4, 11, grids.x, grids.y);

  SUBCASE("one-point grid returns that point") {
    const CvPlan single = CvPlan::make(40, 4, 11, {grids.x[1]}, {grids.y[1]});
    const CvResult r = crossSearch(d.x, d.y, gx, gy, cfg, single);
    CHECK(r.tauX == grids.x[1]);
    CHECK(r.tauY == grids.y[1]);
  }

  SUBCASE("result comes from the grids and the search is deterministic") {
    const CvResult a = crossSearch(d.x, d.y, gx, gy, cfg, plan);
    const CvResult b = crossSearch(d.x, d.y, gx, gy, cfg, plan);
    CHECK(std::find(grids.x.begin(), grids.x.end(), a.tauX) != grids.x.end());
    CHECK(std::find(grids.y.begin(), grids.y.end(), a.tauY) != grids.y.end());
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
      CHECK(a.points[i].score == b.points[i].score);
      CHECK(a.points[i].tauX == b.points[i].tauX);
      CHECK(a.points[i].tauY == b.points[i].tauY);
      CHECK(a.points[i].score >= 0.0);
      CHECK(std::isfinite(a.points[i].score));
    }
    CHECK(a.tauX == b.tauX);
    CHECK(a.tauY == b.tauY);
  }

  SUBCASE("threaded evaluation matches serial") {
    CvPlan threaded = plan;
    threaded.threads = 3;
    const CvResult a = crossSearch(d.x, d.y, gx, gy, cfg, plan);
    const CvResult b = crossSearch(d.x, d.y, gx, gy, cfg, threaded);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i].score == b.points[i].score);
  }

  SUBCASE("relabelling folds leaves the score unchanged") {
    CvPlan relabelled = plan;
    for (auto& f : relabelled.foldAssignment) f = (f + 1) % plan.folds;
    const double a = cvScore(d.x, d.y, gx, gy, cfg, grids.x[1], grids.y[1], plan);
    const double b = cvScore(d.x, d.y, gx, gy, cfg, grids.x[1], grids.y[1], relabelled);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }

  SUBCASE("tau above tau_max everywhere is degenerate") {
    const double big = 10.0 * std::max(grids.x.back(), grids.y.back());
    const CvPoint p = cvEvaluate(d.x, d.y, gx, gy, cfg, big, big, plan);
    CHECK(p.degenerate);
    const CvPlan hopeless = CvPlan::make(40, 4, 11, {big}, {big});
    try {
      crossSearch(d.x, d.y, gx, gy, cfg, hopeless);
      FAIL("expected all-degenerate");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kAllDegenerate);
    }
  }

  SUBCASE("per-iteration selector picks grid values at every step") {
    std::vector<std::pair<double, double>> trace;
    FitConfig one = cfg;
    one.maxOuterIterations = 3;
    const TauSelector selector = perIterationSelector(gx, gy, one, plan, &trace);
    const CcaModel model = fit(d.x, d.y, gx, gy, one, selector);
    REQUIRE(model.components.size() == 1);
    CHECK(trace.size() == static_cast<std::size_t>(model.components[0].iterations));
    for (auto [tx, ty] : trace) {
      CHECK(std::find(grids.x.begin(), grids.x.end(), tx) != grids.x.end());
      CHECK(std::find(grids.y.begin(), grids.y.end(), ty) != grids.y.end());
    }
  }
}

TEST_CASE("tuning mode names") {
  CHECK(parseTuningMode("once") == TuningMode::kOnce);
  CHECK(parseTuningMode("per-iteration") == TuningMode::kPerIteration);
  CHECK(to_string(TuningMode::kPerIteration) == "per-iteration");
  CHECK_THROWS_AS(parseTuningMode("sometimes"), Error);
}
