#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "netcca/random.hpp"
#include "netcca/simgen.hpp"

using namespace netcca;

namespace {

GroundTruth scenario(int id, Index p, Index q, std::uint64_t seed = 1) {
  ScenarioSpec spec;
  spec.id = id;
  spec.p = p;
  spec.q = q;
  spec.n = 80;
  spec.seed = seed;
  return buildScenario(spec);
}

// Independent oracle: singular values of Sxx^{-1/2} Sxy Syy^{-1/2}.
Vector populationCorrelations(const GroundTruth& t) {
  Eigen::SelfAdjointEigenSolver<Matrix> ex(t.sigmaXX());
  Eigen::SelfAdjointEigenSolver<Matrix> ey(t.sigmaYY());
  const Matrix whitened = ex.operatorInverseSqrt() * t.sigmaXY() * ey.operatorInverseSqrt();
  return Eigen::JacobiSVD<Matrix>(whitened).singularValues();
}

StudyConfig smallStudy(int reps) {
  StudyConfig cfg;
  cfg.scenario.id = 2;
  cfg.scenario.p = cfg.scenario.q = 40;
  cfg.scenario.n = 40;
  cfg.methods = defaultMethods();
  cfg.reps = reps;
  cfg.seed = 17;
  cfg.folds = 3;
  cfg.gridSize = 3;
  cfg.maxOuterIterations = 5;
  return cfg;
}

void checkSameRows(const std::vector<ReplicateRow>& a, const std::vector<ReplicateRow>& b) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].replicate == b[i].replicate);
    CHECK(a[i].method == b[i].method);
    CHECK(a[i].side == b[i].side);
    CHECK(a[i].component == b[i].component);
    CHECK(a[i].metrics.tp == b[i].metrics.tp);
    CHECK(a[i].metrics.fp == b[i].metrics.fp);
    CHECK(a[i].metrics.mcc == b[i].metrics.mcc);
    CHECK(a[i].rhoHat == b[i].rhoHat);
    CHECK(a[i].tauX == b[i].tauX);
    CHECK(a[i].tauY == b[i].tauY);
    CHECK(a[i].status == b[i].status);
  }
}

}  // namespace

TEST_CASE("network covariance entries") {
  const Matrix s = networkCovariance();
  REQUIRE(s.rows() == kNetworkNodes);
  CHECK(s(0, 0) == 1.0);
  CHECK(s(0, 1) == kHubLeafCorrelation);
  CHECK(s(1, 2) == doctest::Approx(kLeafLeafCorrelation).epsilon(1e-15));
  CHECK(s(0, 6) == 0.0);
  CHECK(s(5, 11) == 0.0);

  const GroundTruth t = scenario(1, 500, 500);
  const Matrix sxx = t.sigmaXX();
  CHECK(sxx(6, 7) == kHubLeafCorrelation);
  CHECK(sxx(7, 8) == doctest::Approx(kLeafLeafCorrelation).epsilon(1e-15));
  CHECK(sxx(40, 40) == 1.0);
  CHECK(sxx(40, 41) == 0.0);
  CHECK(sxx(2, 40) == 0.0);
  CHECK(t.sigmaYY() == sxx);
}

TEST_CASE("network graph is six stars") {
  const FeatureGraph g = networkGraph(50);
  CHECK(g.nodeCount == 50);
  CHECK(g.edgeCount() == 30);
  for (Index h = 0; h < kNetworkCount; ++h) {
    CHECK(g.degrees[static_cast<std::size_t>(h * kNetworkSize)] == 5);
    CHECK(g.degrees[static_cast<std::size_t>(h * kNetworkSize + 1)] == 1);
  }
  CHECK(g.isSingleton(40));
}

TEST_CASE("scenario supports and population correlations") {
  const GroundTruth t2 = scenario(2, 100, 100);
  std::vector<Index> first12(12);
  for (Index i = 0; i < 12; ++i) first12[static_cast<std::size_t>(i)] = i;
  CHECK(t2.supportX[0] == first12);
  CHECK(t2.supportY[0] == first12);
  CHECK(t2.trueAlpha(0, 0) < 0.0);
  CHECK(t2.trueAlpha(6, 0) > 0.0);
  CHECK(t2.trueAlpha(1, 0) == doctest::Approx(t2.trueAlpha(0, 0) / std::sqrt(5.0)).epsilon(1e-14));
  CHECK(populationCorrelations(t2)(0) == doctest::Approx(0.9).epsilon(1e-10));
  CHECK(populationCorrelations(t2)(1) <= 1e-10);

  const GroundTruth t1 = scenario(1, 60, 60);
  CHECK(t1.supportX[0].size() == 36);
  CHECK(populationCorrelations(t1)(0) == doctest::Approx(0.9).epsilon(1e-10));

  const GroundTruth t3 = scenario(3, 100, 100);
  REQUIRE(t3.trueAlpha.cols() == 2);
  const Vector c3 = populationCorrelations(t3);
  CHECK(c3(0) == doctest::Approx(0.9).epsilon(1e-10));
  CHECK(c3(1) == doctest::Approx(0.6).epsilon(1e-10));
  CHECK(c3(2) <= 1e-10);
  CHECK(t3.supportX[0].size() == 24);
  CHECK(t3.supportX[1].front() == 24);
  CHECK(t3.supportY[0].size() == 18);
  CHECK(t3.supportY[1].front() == 18);
}

TEST_CASE("true vectors are normalized and scenario-three components orthogonal") {
  for (int id = 1; id <= 4; ++id) {
    const GroundTruth t = scenario(id, 60, 50, 3);
    const Matrix ga = t.trueAlpha.transpose() * t.sigmaXX() * t.trueAlpha;
    const Matrix gb = t.trueBeta.transpose() * t.sigmaYY() * t.trueBeta;
    CHECK((ga - Matrix::Identity(ga.rows(), ga.cols())).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((gb - Matrix::Identity(gb.rows(), gb.cols())).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("every scenario covariance is positive semidefinite") {
  for (Index dim : {40, 100, 500}) {
    for (int id = 1; id <= 4; ++id) {
      const GroundTruth t = scenario(id, dim, dim, 5);
      Eigen::SelfAdjointEigenSolver<Matrix> eig(t.sigma, Eigen::EigenvaluesOnly);
      CHECK(eig.eigenvalues().minCoeff() >= -1e-8);
    }
  }
}

TEST_CASE("scenario four is a relabelled scenario two") {
  const GroundTruth t2 = scenario(2, 80, 70);
  const GroundTruth t4 = scenario(4, 80, 70, 9);
  const std::set<Index> px(t4.positionX.begin(), t4.positionX.end());
  CHECK(px.size() == 80);
  CHECK(*px.rbegin() == 79);
  const Matrix s4 = t4.sigmaXX();
  const Matrix s2 = t2.sigmaXX();
  for (Index i = 0; i < 80; ++i) {
    for (Index j = 0; j < 80; ++j) {
      REQUIRE(s4(t4.positionX[static_cast<std::size_t>(i)], t4.positionX[static_cast<std::size_t>(j)]) ==
              s2(i, j));
    }
    CHECK(t4.trueAlpha(t4.positionX[static_cast<std::size_t>(i)], 0) == t2.trueAlpha(i, 0));
  }
  for (Index i = 0; i < 70; ++i) {
    CHECK(t4.trueBeta(t4.positionY[static_cast<std::size_t>(i)], 0) == t2.trueBeta(i, 0));
  }
  CHECK(t4.supportX[0] != t2.supportX[0]);
  CHECK(populationCorrelations(t4)(0) == doctest::Approx(0.9).epsilon(1e-10));
  // The fitter keeps the unpermuted prior graph.
  CHECK(t4.graphX.edges == t2.graphX.edges);
  CHECK(scenario(4, 80, 70, 9).positionX == t4.positionX);
  CHECK(scenario(4, 80, 70, 10).positionX != t4.positionX);
}

TEST_CASE("scenario validation") {
  ScenarioSpec spec;
  spec.id = 5;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec.id = 2;
  spec.p = 30;
  CHECK_THROWS_AS(spec.validate(), Error);
}

TEST_CASE("multivariate normal sampling") {
  const GroundTruth t = scenario(2, 40, 40);
  const auto [x1, y1] = sampleMvn(t, 10, 42);
  const auto [x2, y2] = sampleMvn(t, 10, 42);
  CHECK(x1 == x2);
  CHECK(y1 == y2);
  CHECK(sampleMvn(t, 10, 43).first != x1);

  const Index n = 50000;
  const auto [x, y] = sampleMvn(t, n, 7);
  Matrix joint(n, 80);
  joint << x, y;
  const Vector mean = joint.colwise().mean();
  CHECK(mean.cwiseAbs().maxCoeff() <= 4.0 / std::sqrt(static_cast<double>(n)));
  const Matrix centered = joint.rowwise() - mean.transpose();
  const Matrix cov = centered.transpose() * centered / static_cast<double>(n - 1);
  CHECK((cov - t.sigma).cwiseAbs().maxCoeff() <= 0.05);
}

TEST_CASE("selection metrics") {
  SUBCASE("perfect recovery") {
    const SelectionMetrics m = selectionMetrics({0, 1, 2}, {0, 1, 2}, 10);
    CHECK(m.tp == 3);
    CHECK(m.tn == 7);
    CHECK(m.sensitivity == 1.0);
    CHECK(m.specificity == 1.0);
    CHECK(m.mcc == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("balanced confusion gives zero correlation") {
    const SelectionMetrics m = selectionMetrics({0, 2}, {0, 1}, 4);
    CHECK(m.tp == 1);
    CHECK(m.fp == 1);
    CHECK(m.fn == 1);
    CHECK(m.tn == 1);
    CHECK(m.mcc == 0.0);
  }
  SUBCASE("worked example") {
    // TP = 6, FN = 2, FP = 12, TN = 80.
    std::vector<Index> truth;
    for (Index i = 0; i < 8; ++i) truth.push_back(i);
    std::vector<Index> selected;
    for (Index i = 0; i < 6; ++i) selected.push_back(i);
    for (Index i = 8; i < 20; ++i) selected.push_back(i);
    const SelectionMetrics m = selectionMetrics(selected, truth, 100);
    CHECK(m.tp == 6);
    CHECK(m.fn == 2);
    CHECK(m.fp == 12);
    CHECK(m.tn == 80);
    CHECK(m.sensitivity == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(m.specificity == doctest::Approx(80.0 / 92.0).epsilon(1e-15));
    const double expected = (6.0 * 80 - 12.0 * 2) / std::sqrt(18.0 * 8 * 92 * 82);
    CHECK(m.mcc == doctest::Approx(expected).epsilon(1e-15));
    CHECK(m.mcc == doctest::Approx(0.4375).epsilon(1e-3));
  }
  SUBCASE("empty selection has zero denominators") {
    const SelectionMetrics m = selectionMetrics({}, {0, 1}, 5);
    CHECK(m.sensitivity == 0.0);
    CHECK(m.specificity == 1.0);
    CHECK(m.mcc == 0.0);
  }
  SUBCASE("counts always add up") {
    RandomStream rng(99);
    for (int trial = 0; trial < 200; ++trial) {
      const Index total = 1 + static_cast<Index>(rng.below(60));
      std::vector<Index> a;
      std::vector<Index> b;
      for (Index i = 0; i < total; ++i) {
        if (rng.uniform() < 0.3) a.push_back(i);
        if (rng.uniform() < 0.2) b.push_back(i);
      }
      const SelectionMetrics m = selectionMetrics(a, b, total);
      CHECK(m.tp + m.fp + m.tn + m.fn == total);
      CHECK(m.mcc >= -1.0);
      CHECK(m.mcc <= 1.0);
    }
  }
}

TEST_CASE("study runs are reproducible, shardable and resumable") {
  const StudyConfig cfg = smallStudy(3);
  const StudyResult serial = runStudy(cfg);
  CHECK(serial.replicatesRun == 3);
  CHECK(serial.rows.size() == 3 * 2 * 2);
  for (const auto& row : serial.rows) CHECK(row.status == "ok");

  SUBCASE("same seed, same output") {
    const StudyResult again = runStudy(cfg);
    CHECK(replicatesCsv(again.rows) == replicatesCsv(serial.rows));
  }

  SUBCASE("shards reassemble the serial run") {
    std::vector<ReplicateRow> merged;
    for (int s = 0; s < 2; ++s) {
      StudyConfig shard = cfg;
      shard.shardCount = 2;
      shard.shardIndex = s;
      const StudyResult part = runStudy(shard);
      merged.insert(merged.end(), part.rows.begin(), part.rows.end());
    }
    std::stable_sort(merged.begin(), merged.end(),
                     [](const ReplicateRow& a, const ReplicateRow& b) {
                       return a.replicate < b.replicate;
                     });
    checkSameRows(merged, serial.rows);
  }

  SUBCASE("resume skips finished replicates") {
    std::vector<ReplicateRow> first;
    for (const auto& row : serial.rows) {
      if (row.replicate == 0) first.push_back(row);
    }
    int calls = 0;
    const StudyResult resumed = runStudy(cfg, first, [&](int) { ++calls; });
    CHECK(calls == 2);
    checkSameRows(resumed.rows, serial.rows);
  }

  SUBCASE("threads do not change the output") {
    StudyConfig threaded = cfg;
    threaded.threads = 2;
    CHECK(replicatesCsv(runStudy(threaded).rows) == replicatesCsv(serial.rows));
  }

  SUBCASE("csv round trip") {
    const std::string text = replicatesCsv(serial.rows);
    const std::vector<ReplicateRow> parsed = parseReplicatesCsv(text);
    checkSameRows(parsed, serial.rows);
    CHECK(replicatesCsv(parsed) == text);
    const std::vector<SummaryRow> summary = summarize(serial.rows);
    REQUIRE(summary.size() == 4);
    CHECK(summary[0].method == "fused-B");
    CHECK(summary[0].completed == 3);
    CHECK(summaryCsv(summary).rfind("method,side,component,completed", 0) == 0);
  }
}

TEST_CASE("summary statistics") {
  std::vector<ReplicateRow> rows(3);
  const double mcc[3] = {0.2, 0.4, 0.9};
  for (int i = 0; i < 3; ++i) {
    rows[static_cast<std::size_t>(i)].replicate = i;
    rows[static_cast<std::size_t>(i)].method = "m";
    rows[static_cast<std::size_t>(i)].metrics.mcc = mcc[i];
  }
  rows.push_back(rows[0]);
  rows.back().replicate = 3;
  rows.back().status = "failed: boom";
  const std::vector<SummaryRow> s = summarize(rows);
  REQUIRE(s.size() == 1);
  CHECK(s[0].completed == 3);
  CHECK(s[0].failed == 1);
  CHECK(s[0].meanMcc == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s[0].sdMcc == doctest::Approx(std::sqrt(0.13)).epsilon(1e-14));
}
