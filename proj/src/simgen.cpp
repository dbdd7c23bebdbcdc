#include "netcca/simgen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <tuple>

#include "netcca/io.hpp"
#include "netcca/parallel.hpp"
#include "netcca/random.hpp"

namespace netcca {

void ScenarioSpec::validate() const {
  if (id < 1 || id > 4) {
    throw Error(ErrorCode::kInvalidArgument,
                "scenario must be 1, 2, 3 or 4 (got " + std::to_string(id) + ")");
  }
  if (p < kNetworkNodes || q < kNetworkNodes) {
    throw Error(ErrorCode::kInvalidArgument, "p and q must be at least 36");
  }
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "n must be at least 2");
}

Matrix networkCovariance() {
  Matrix block = Matrix::Constant(kNetworkSize, kNetworkSize, kLeafLeafCorrelation);
  block.row(0).setConstant(kHubLeafCorrelation);
  block.col(0).setConstant(kHubLeafCorrelation);
  block.diagonal().setOnes();
  Matrix out = Matrix::Zero(kNetworkNodes, kNetworkNodes);
  for (Index b = 0; b < kNetworkCount; ++b) {
    out.block(b * kNetworkSize, b * kNetworkSize, kNetworkSize, kNetworkSize) = block;
  }
  return out;
}

FeatureGraph networkGraph(Index p) {
  std::vector<Edge> edges;
  for (Index b = 0; b < kNetworkCount; ++b) {
    const auto hub = static_cast<std::size_t>(b * kNetworkSize);
    for (Index leaf = 1; leaf < kNetworkSize; ++leaf) {
      edges.emplace_back(hub, hub + static_cast<std::size_t>(leaf));
    }
  }
  return FeatureGraph::build(static_cast<std::size_t>(p), edges);
}

namespace {

// Hub value v and leaf values v / sqrt(5) for each listed network (1-based
// network number -> hub value); other entries zero.
Vector networkPattern(Index dim, const std::vector<std::pair<int, double>>& networks) {
  Vector v = Vector::Zero(dim);
  const double leafScale = 1.0 / std::sqrt(static_cast<double>(kNetworkSize - 1));
  for (const auto& [network, value] : networks) {
    const Index hub = (network - 1) * kNetworkSize;
    v(hub) = value;
    for (Index leaf = 1; leaf < kNetworkSize; ++leaf) v(hub + leaf) = value * leafScale;
  }
  return v;
}

Matrix paddedCovariance(Index dim) {
  Matrix s = Matrix::Identity(dim, dim);
  s.topLeftCorner(kNetworkNodes, kNetworkNodes) = networkCovariance();
  return s;
}

void normalizeColumns(Matrix& vectors, const Matrix& sigma) {
  for (Index k = 0; k < vectors.cols(); ++k) {
    const double norm = std::sqrt(vectors.col(k).dot(sigma * vectors.col(k)));
    vectors.col(k) /= norm;
  }
}

std::vector<Index> support(const Vector& v) {
  std::vector<Index> out;
  for (Index i = 0; i < v.size(); ++i) {
    if (v(i) != 0.0) out.push_back(i);
  }
  return out;
}

// Positions for the 12 signal variables drawn uniformly without
// replacement; the rest keep their relative order in the free slots.
std::vector<Index> dispersal(Index dim, std::uint64_t seed) {
  RandomStream rng(seed);
  const auto perm = rng.permutation(static_cast<std::size_t>(dim));
  constexpr Index kSignal = 2 * kNetworkSize;
  std::vector<Index> position(static_cast<std::size_t>(dim), -1);
  std::vector<bool> taken(static_cast<std::size_t>(dim), false);
  for (Index i = 0; i < kSignal; ++i) {
    position[static_cast<std::size_t>(i)] = static_cast<Index>(perm[static_cast<std::size_t>(i)]);
    taken[perm[static_cast<std::size_t>(i)]] = true;
  }
  Index slot = 0;
  for (Index i = kSignal; i < dim; ++i) {
    while (taken[static_cast<std::size_t>(slot)]) ++slot;
    position[static_cast<std::size_t>(i)] = slot++;
  }
  return position;
}

Matrix permuteSymmetric(const Matrix& m, const std::vector<Index>& position) {
  Matrix out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      out(position[static_cast<std::size_t>(i)], position[static_cast<std::size_t>(j)]) = m(i, j);
    }
  }
  return out;
}

Matrix permuteRows(const Matrix& m, const std::vector<Index>& position) {
  Matrix out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i) out.row(position[static_cast<std::size_t>(i)]) = m.row(i);
  return out;
}

std::vector<Index> identityPositions(Index dim) {
  std::vector<Index> out(static_cast<std::size_t>(dim));
  for (Index i = 0; i < dim; ++i) out[static_cast<std::size_t>(i)] = i;
  return out;
}

}  // namespace

GroundTruth buildScenario(const ScenarioSpec& spec) {
  spec.validate();
  GroundTruth truth;
  truth.spec = spec;
  const Index p = spec.p;
  const Index q = spec.q;
  Matrix sxx = paddedCovariance(p);
  Matrix syy = paddedCovariance(q);
  Matrix alpha;
  Matrix beta;
  switch (spec.id) {
    case 1: {
      const std::vector<std::pair<int, double>> pattern = {{1, -20}, {2, 20}, {3, -17},
                                                           {4, 17},  {5, -10}, {6, 10}};
      alpha = networkPattern(p, pattern);
      beta = networkPattern(q, pattern);
      truth.correlations = Vector::Constant(1, 0.9);
      break;
    }
    case 2:
    case 4:
      alpha = networkPattern(p, {{1, -20}, {2, 20}});
      beta = networkPattern(q, {{1, -20}, {2, 20}});
      truth.correlations = Vector::Constant(1, 0.9);
      break;
    case 3:
      alpha.resize(p, 2);
      beta.resize(q, 2);
      alpha.col(0) = networkPattern(p, {{1, -20}, {2, 20}, {3, -17}, {4, 17}});
      alpha.col(1) = networkPattern(p, {{5, 17}, {6, -17}});
      beta.col(0) = networkPattern(q, {{1, -20}, {2, 20}, {3, -17}});
      beta.col(1) = networkPattern(q, {{4, 17}, {5, -10}, {6, 10}});
      truth.correlations.resize(2);
      truth.correlations << 0.9, 0.6;
      break;
  }
  normalizeColumns(alpha, sxx);
  normalizeColumns(beta, syy);

  truth.positionX = identityPositions(p);
  truth.positionY = identityPositions(q);
  if (spec.id == 4) {
    truth.positionX = dispersal(p, deriveSeed(spec.seed, 0));
    truth.positionY = dispersal(q, deriveSeed(spec.seed, 1));
    sxx = permuteSymmetric(sxx, truth.positionX);
    syy = permuteSymmetric(syy, truth.positionY);
    alpha = permuteRows(alpha, truth.positionX);
    beta = permuteRows(beta, truth.positionY);
  }

  const Matrix sxy = sxx * alpha * truth.correlations.asDiagonal() * beta.transpose() * syy;
  truth.sigma.resize(p + q, p + q);
  truth.sigma.topLeftCorner(p, p) = sxx;
  truth.sigma.bottomRightCorner(q, q) = syy;
  truth.sigma.topRightCorner(p, q) = sxy;
  truth.sigma.bottomLeftCorner(q, p) = sxy.transpose();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(truth.sigma, Eigen::EigenvaluesOnly);
  const double minEig = eig.eigenvalues().minCoeff();
  if (minEig < -1e-8) {
    throw Error(ErrorCode::kNotPositiveSemidefinite,
                "scenario covariance has eigenvalue " + formatNumber(minEig));
  }

  truth.trueAlpha = alpha;
  truth.trueBeta = beta;
  for (Index k = 0; k < alpha.cols(); ++k) {
    truth.supportX.push_back(support(alpha.col(k)));
    truth.supportY.push_back(support(beta.col(k)));
  }
  truth.graphX = networkGraph(p);
  truth.graphY = networkGraph(q);
  return truth;
}

std::pair<Matrix, Matrix> sampleMvn(const GroundTruth& truth, Index n, std::uint64_t seed) {
  const Index dim = truth.sigma.rows();
  Matrix factor;
  Eigen::LLT<Matrix> llt(truth.sigma);
  if (llt.info() == Eigen::Success) {
    factor = llt.matrixL();
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(truth.sigma);
    factor = eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  }
  RandomStream rng(seed);
  Matrix z(n, dim);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < dim; ++j) z(i, j) = rng.normal();
  }
  const Matrix joint = z * factor.transpose();
  return {joint.leftCols(truth.p()), joint.rightCols(truth.q())};
}

SelectionMetrics selectionMetrics(const std::vector<Index>& selected,
                                  const std::vector<Index>& trueSupport, Index total) {
  std::vector<char> isSelected(static_cast<std::size_t>(total), 0);
  std::vector<char> isTrue(static_cast<std::size_t>(total), 0);
  for (Index i : selected) {
    if (i < 0 || i >= total) throw Error(ErrorCode::kInvalidArgument, "selected index out of range");
    isSelected[static_cast<std::size_t>(i)] = 1;
  }
  for (Index i : trueSupport) {
    if (i < 0 || i >= total) throw Error(ErrorCode::kInvalidArgument, "support index out of range");
    isTrue[static_cast<std::size_t>(i)] = 1;
  }
  SelectionMetrics m;
  for (std::size_t i = 0; i < isTrue.size(); ++i) {
    if (isSelected[i] && isTrue[i]) ++m.tp;
    if (isSelected[i] && !isTrue[i]) ++m.fp;
    if (!isSelected[i] && !isTrue[i]) ++m.tn;
    if (!isSelected[i] && isTrue[i]) ++m.fn;
  }
  const auto tp = static_cast<double>(m.tp);
  const auto fp = static_cast<double>(m.fp);
  const auto tn = static_cast<double>(m.tn);
  const auto fn = static_cast<double>(m.fn);
  m.sensitivity = m.tp + m.fn > 0 ? tp / (tp + fn) : 0.0;
  m.specificity = m.tn + m.fp > 0 ? tn / (tn + fp) : 0.0;
  const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  m.mcc = denom > 0.0 ? (tp * tn - fp * fn) / std::sqrt(denom) : 0.0;
  return m;
}

void StudyConfig::validate() const {
  scenario.validate();
  if (methods.empty()) throw Error(ErrorCode::kInvalidArgument, "no methods configured");
  for (const auto& m : methods) m.penalty.validate();
  if (reps < 1) throw Error(ErrorCode::kInvalidArgument, "reps must be >= 1");
  if (folds < 2) throw Error(ErrorCode::kInvalidArgument, "folds must be >= 2");
  if (folds > scenario.n) {
    throw Error(ErrorCode::kInvalidArgument, "folds (" + std::to_string(folds) +
                                                 ") exceeds n (" + std::to_string(scenario.n) +
                                                 ")");
  }
  if (gridSize < 2) throw Error(ErrorCode::kInvalidArgument, "grid size must be >= 2");
  if (maxOuterIterations < 1) throw Error(ErrorCode::kInvalidArgument, "maxOuterIterations >= 1");
  if (threads < 1) throw Error(ErrorCode::kInvalidArgument, "threads must be >= 1");
  if (shardCount < 1 || shardIndex < 0 || shardIndex >= shardCount) {
    throw Error(ErrorCode::kInvalidArgument, "shard index must lie in [0, shard count)");
  }
}

std::vector<MethodConfig> defaultMethods() {
  PenaltyConfig fused{PenaltyFamily::kFused, ConstraintVariant::kB, 0.5, 2.0};
  return {{"fused-B", fused, false}, {"l1-B", fused, true}};
}

std::uint64_t replicateSeed(std::uint64_t studySeed, int replicate) {
  return deriveSeed(studySeed, static_cast<std::uint64_t>(replicate));
}

namespace {

std::string sanitize(std::string text) {
  for (char& c : text) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return text;
}

void appendRows(std::vector<ReplicateRow>& rows, int replicate, const MethodConfig& method,
                const GroundTruth& truth, const CcaModel* model, double tauX, double tauY,
                std::optional<double> runtime, const std::string& status) {
  const Index k = truth.trueAlpha.cols();
  for (Index c = 0; c < k; ++c) {
    const CcaComponent* component =
        model && c < static_cast<Index>(model->components.size())
            ? &model->components[static_cast<std::size_t>(c)]
            : nullptr;
    for (char side : {'X', 'Y'}) {
      ReplicateRow row;
      row.replicate = replicate;
      row.method = method.name;
      row.side = side;
      row.component = static_cast<int>(c + 1);
      row.tauX = tauX;
      row.tauY = tauY;
      row.runtimeSeconds = runtime;
      row.status = status;
      if (model) {
        const Index total = side == 'X' ? truth.p() : truth.q();
        const auto& trueSupport = side == 'X' ? truth.supportX[static_cast<std::size_t>(c)]
                                              : truth.supportY[static_cast<std::size_t>(c)];
        std::vector<Index> selected;
        if (component) {
          selected = selectedIndices(side == 'X' ? component->alpha : component->beta);
          row.rhoHat = component->rho;
        }
        row.metrics = selectionMetrics(selected, trueSupport, total);
      }
      rows.push_back(row);
    }
  }
}

}  // namespace

std::vector<ReplicateRow> runReplicate(const StudyConfig& cfg, const GroundTruth& truth,
                                       int replicate) {
  const std::uint64_t seed = replicateSeed(cfg.seed, replicate);
  const auto [rawX, rawY] = sampleMvn(truth, cfg.scenario.n, deriveSeed(seed, 0));
  std::vector<ReplicateRow> rows;
  std::optional<DataMatrix> x;
  std::optional<DataMatrix> y;
  std::string dataError;
  try {
    x = standardize(rawX);
    y = standardize(rawY);
  } catch (const Error& e) {
    dataError = e.what();
  }
  for (const MethodConfig& method : cfg.methods) {
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&]() -> std::optional<double> {
      if (!cfg.recordTiming) return std::nullopt;
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    if (!x || !y) {
      appendRows(rows, replicate, method, truth, nullptr, 0.0, 0.0, elapsed(),
                 "failed: " + sanitize(dataError));
      continue;
    }
    try {
      const FeatureGraph gx =
          method.emptyGraph ? FeatureGraph::empty(static_cast<std::size_t>(truth.p())) : truth.graphX;
      const FeatureGraph gy =
          method.emptyGraph ? FeatureGraph::empty(static_cast<std::size_t>(truth.q())) : truth.graphY;
      FitConfig fc;
      fc.penalty = method.penalty;
      fc.maxOuterIterations = cfg.maxOuterIterations;
      fc.components = static_cast<int>(truth.trueAlpha.cols());
      const TauGrids grids = defaultTauGrids(*x, *y, method.penalty.constraint, cfg.gridSize);
      const CvPlan plan =
          CvPlan::make(cfg.scenario.n, cfg.folds, deriveSeed(seed, 1), grids.x, grids.y);
      CcaModel model;
      if (cfg.tuningMode == TuningMode::kOnce) {
        const CvResult cv = crossSearch(*x, *y, gx, gy, fc, plan);
        fc.tauX = cv.tauX;
        fc.tauY = cv.tauY;
        model = fit(*x, *y, gx, gy, fc);
      } else {
        std::vector<std::pair<double, double>> trace;
        model = fit(*x, *y, gx, gy, fc, perIterationSelector(gx, gy, fc, plan, &trace));
        if (!trace.empty()) std::tie(fc.tauX, fc.tauY) = trace.back();
      }
      appendRows(rows, replicate, method, truth, &model, fc.tauX, fc.tauY, elapsed(), "ok");
    } catch (const Error& e) {
      appendRows(rows, replicate, method, truth, nullptr, 0.0, 0.0, elapsed(),
                 "failed: " + sanitize(e.what()));
    }
  }
  return rows;
}

namespace {

void sortRows(std::vector<ReplicateRow>& rows, const std::vector<MethodConfig>& methods) {
  std::map<std::string, std::size_t> order;
  for (std::size_t i = 0; i < methods.size(); ++i) order.emplace(methods[i].name, i);
  auto rank = [&](const std::string& name) {
    auto it = order.find(name);
    return it == order.end() ? methods.size() : it->second;
  };
  std::stable_sort(rows.begin(), rows.end(), [&](const ReplicateRow& a, const ReplicateRow& b) {
    return std::make_tuple(a.replicate, rank(a.method), a.component, a.side) <
           std::make_tuple(b.replicate, rank(b.method), b.component, b.side);
  });
}

}  // namespace

StudyResult runStudy(const StudyConfig& cfg, const std::vector<ReplicateRow>& previous,
                     const std::function<void(int)>& onReplicateDone) {
  cfg.validate();
  const GroundTruth truth = buildScenario(cfg.scenario);
  const std::size_t rowsPerReplicate =
      cfg.methods.size() * 2 * static_cast<std::size_t>(truth.trueAlpha.cols());
  std::map<int, std::size_t> previousCounts;
  // Failed replicates are rerun on resume.
  for (const auto& row : previous) {
    if (row.status == "ok") ++previousCounts[row.replicate];
  }

  std::vector<int> todo;
  for (int r = 0; r < cfg.reps; ++r) {
    if (r % cfg.shardCount != cfg.shardIndex) continue;
    auto it = previousCounts.find(r);
    if (it != previousCounts.end() && it->second >= rowsPerReplicate) continue;
    todo.push_back(r);
  }

  std::vector<std::vector<ReplicateRow>> fresh(todo.size());
  std::mutex callbackMutex;
  parallelFor(todo.size(), cfg.threads, [&](std::size_t i) {
    fresh[i] = runReplicate(cfg, truth, todo[i]);
    if (onReplicateDone) {
      std::lock_guard<std::mutex> lock(callbackMutex);
      onReplicateDone(todo[i]);
    }
  });

  StudyResult result;
  std::set<int> redone(todo.begin(), todo.end());
  for (const auto& row : previous) {
    if (!redone.count(row.replicate)) result.rows.push_back(row);
  }
  for (auto& chunk : fresh) {
    for (auto& row : chunk) result.rows.push_back(std::move(row));
  }
  sortRows(result.rows, cfg.methods);
  result.replicatesRun = static_cast<int>(todo.size());
  std::set<int> failed;
  for (const auto& row : result.rows) {
    if (row.status != "ok") failed.insert(row.replicate);
  }
  result.replicatesFailed = static_cast<int>(failed.size());
  result.summary = summarize(result.rows);
  return result;
}

std::vector<SummaryRow> summarize(const std::vector<ReplicateRow>& rows) {
  using Key = std::tuple<std::string, int, char>;
  std::vector<Key> order;
  std::map<Key, std::vector<const ReplicateRow*>> groups;
  for (const auto& row : rows) {
    const Key key{row.method, row.component, row.side};
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&row);
  }
  auto meanSd = [](const std::vector<double>& values) {
    if (values.empty()) return std::make_pair(0.0, 0.0);
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    if (values.size() < 2) return std::make_pair(mean, 0.0);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::make_pair(mean, std::sqrt(ss / static_cast<double>(values.size() - 1)));
  };
  std::vector<SummaryRow> out;
  for (const Key& key : order) {
    SummaryRow s;
    std::tie(s.method, s.component, s.side) = key;
    std::vector<double> sens;
    std::vector<double> spec;
    std::vector<double> mcc;
    std::vector<double> rho;
    for (const ReplicateRow* row : groups[key]) {
      if (row->status != "ok") {
        ++s.failed;
        continue;
      }
      ++s.completed;
      sens.push_back(row->metrics.sensitivity);
      spec.push_back(row->metrics.specificity);
      mcc.push_back(row->metrics.mcc);
      rho.push_back(row->rhoHat);
    }
    std::tie(s.meanSensitivity, s.sdSensitivity) = meanSd(sens);
    std::tie(s.meanSpecificity, s.sdSpecificity) = meanSd(spec);
    std::tie(s.meanMcc, s.sdMcc) = meanSd(mcc);
    s.meanRho = meanSd(rho).first;
    out.push_back(s);
  }
  return out;
}

namespace {

constexpr const char* kReplicateHeader =
    "replicate,method,side,component,tp,fp,tn,fn,sensitivity,specificity,mcc,rhoHat,tauX,tauY,"
    "runtimeSeconds,status";

}  // namespace

std::string replicatesCsv(const std::vector<ReplicateRow>& rows) {
  std::string out = std::string(kReplicateHeader) + "\n";
  for (const auto& r : rows) {
    out += std::to_string(r.replicate) + "," + r.method + "," + std::string(1, r.side) + "," +
           std::to_string(r.component) + "," + std::to_string(r.metrics.tp) + "," +
           std::to_string(r.metrics.fp) + "," + std::to_string(r.metrics.tn) + "," +
           std::to_string(r.metrics.fn) + "," + formatNumber(r.metrics.sensitivity) + "," +
           formatNumber(r.metrics.specificity) + "," + formatNumber(r.metrics.mcc) + "," +
           formatNumber(r.rhoHat) + "," + formatNumber(r.tauX) + "," + formatNumber(r.tauY) + "," +
           (r.runtimeSeconds ? formatNumber(*r.runtimeSeconds) : std::string("NA")) + "," +
           sanitize(r.status) + "\n";
  }
  return out;
}

std::string summaryCsv(const std::vector<SummaryRow>& rows) {
  std::string out =
      "method,side,component,completed,failed,meanSensitivity,sdSensitivity,meanSpecificity,"
      "sdSpecificity,meanMcc,sdMcc,meanRhoHat\n";
  for (const auto& s : rows) {
    out += s.method + "," + std::string(1, s.side) + "," + std::to_string(s.component) + "," +
           std::to_string(s.completed) + "," + std::to_string(s.failed) + "," +
           formatNumber(s.meanSensitivity) + "," + formatNumber(s.sdSensitivity) + "," +
           formatNumber(s.meanSpecificity) + "," + formatNumber(s.sdSpecificity) + "," +
           formatNumber(s.meanMcc) + "," + formatNumber(s.sdMcc) + "," + formatNumber(s.meanRho) +
           "\n";
  }
  return out;
}

std::vector<ReplicateRow> parseReplicatesCsv(const std::string& text) {
  std::vector<ReplicateRow> rows;
  std::size_t pos = 0;
  std::size_t lineNumber = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string_view line(text.data() + pos, end - pos);
    pos = end + 1;
    ++lineNumber;
    if (line.empty() || line == "\r") continue;
    const auto cells = splitCsvLine(line);
    if (lineNumber == 1) {
      std::string header;
      for (std::size_t i = 0; i < cells.size(); ++i) header += (i ? "," : "") + cells[i];
      if (header != kReplicateHeader) {
        throw Error(ErrorCode::kParseError, "unexpected replicate CSV header", lineNumber);
      }
      continue;
    }
    if (cells.size() != 16) {
      throw Error(ErrorCode::kParseError, "replicate CSV row needs 16 cells", lineNumber);
    }
    ReplicateRow r;
    try {
      r.replicate = std::stoi(cells[0]);
      r.method = cells[1];
      r.side = cells[2].empty() ? 'X' : cells[2][0];
      r.component = std::stoi(cells[3]);
      r.metrics.tp = std::stol(cells[4]);
      r.metrics.fp = std::stol(cells[5]);
      r.metrics.tn = std::stol(cells[6]);
      r.metrics.fn = std::stol(cells[7]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParseError, "bad integer in replicate CSV", lineNumber);
    }
    r.metrics.sensitivity = parseNumber(cells[8]);
    r.metrics.specificity = parseNumber(cells[9]);
    r.metrics.mcc = parseNumber(cells[10]);
    r.rhoHat = parseNumber(cells[11]);
    r.tauX = parseNumber(cells[12]);
    r.tauY = parseNumber(cells[13]);
    if (cells[14] != "NA") r.runtimeSeconds = parseNumber(cells[14]);
    r.status = cells[15];
    rows.push_back(r);
  }
  return rows;
}

}  // namespace netcca
