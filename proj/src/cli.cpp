#include "netcca/cli.hpp"

#include <cmath>
#include <filesystem>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "netcca/error.hpp"
#include "netcca/graph.hpp"
#include "netcca/io.hpp"
#include "netcca/parallel.hpp"
#include "netcca/random.hpp"
#include "netcca/scca.hpp"
#include "netcca/simgen.hpp"
#include "netcca/tuning.hpp"

namespace netcca {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct Options {
  std::string command;
  std::vector<std::string> arguments;
  std::string x;
  std::string y;
  std::string graphX;
  std::string graphY;
  std::string penalty = "fused";
  std::string constraint = "B";
  double eta = 0.5;
  double gamma = 2.0;
  std::optional<double> tauX;
  std::optional<double> tauY;
  int gridSize = 8;
  int folds = 5;
  int components = 1;
  std::uint64_t seed = 1;
  int scenario = 2;
  int reps = 25;
  Index p = 100;
  Index q = 100;
  Index n = 80;
  bool log10 = false;
  std::string tuningMode = "once";
  std::string out = ".";
  int maxOuterIterations = 20;
  int threads = 0;
  bool recordTiming = false;
  int shardIndex = 0;
  int shardCount = 1;
  bool resume = false;
};

PenaltyConfig penaltyConfig(const Options& o) {
  PenaltyConfig cfg{parsePenaltyFamily(o.penalty), parseConstraintVariant(o.constraint), o.eta,
                    o.gamma};
  cfg.validate();
  return cfg;
}

ordered_json manifestJson(const Options& o, int threads) {
  ordered_json m;
  m["tool"] = "netcca";
  m["version"] = NETCCA_VERSION;
  m["command"] = o.command;
  m["arguments"] = o.arguments;
  ordered_json opts;
  if (o.command != "simulate") {
    opts["x"] = o.x;
    opts["y"] = o.y;
    opts["graphX"] = o.graphX;
    opts["graphY"] = o.graphY;
    opts["log10"] = o.log10;
    opts["components"] = o.components;
  }
  opts["penalty"] = o.penalty;
  opts["constraint"] = o.constraint;
  opts["eta"] = o.eta;
  opts["gamma"] = o.gamma;
  opts["tauX"] = o.tauX ? ordered_json(*o.tauX) : ordered_json(nullptr);
  opts["tauY"] = o.tauY ? ordered_json(*o.tauY) : ordered_json(nullptr);
  opts["maxOuterIterations"] = o.maxOuterIterations;
  if (o.command != "fit") {
    opts["tauGridSize"] = o.gridSize;
    opts["folds"] = o.folds;
    opts["tuningMode"] = o.tuningMode;
  }
  if (o.command == "simulate") {
    opts["scenario"] = o.scenario;
    opts["reps"] = o.reps;
    opts["p"] = o.p;
    opts["q"] = o.q;
    opts["n"] = o.n;
    opts["recordTiming"] = o.recordTiming;
    opts["shardIndex"] = o.shardIndex;
    opts["shardCount"] = o.shardCount;
  }
  m["options"] = opts;
  m["seed"] = o.seed;
  m["threads"] = threads;
  return m;
}

std::string existingFile(const std::string& path, const std::string& flag) {
  if (path.empty()) throw Error(ErrorCode::kInvalidArgument, flag + " is required");
  if (!fs::is_regular_file(path)) throw Error(ErrorCode::kIo, flag + ": file not found: " + path);
  return path;
}

struct Inputs {
  DataTable tableX;
  DataTable tableY;
  DataMatrix x;
  DataMatrix y;
  FeatureGraph graphX;
  FeatureGraph graphY;
};

DataMatrix standardizeNamed(const DataTable& table, const std::string& side) {
  try {
    return standardize(table.values);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kZeroVarianceColumn && e.index()) {
      throw Error(e.code(), side + ": column '" + table.featureNames[*e.index()] +
                                "' has zero variance");
    }
    throw;
  }
}

Inputs loadInputs(const Options& o) {
  // Every referenced file is checked before any is parsed.
  existingFile(o.x, "--x");
  existingFile(o.y, "--y");
  if (!o.graphX.empty()) existingFile(o.graphX, "--graph-x");
  if (!o.graphY.empty()) existingFile(o.graphY, "--graph-y");

  Inputs in;
  in.tableX = readDataCsv(o.x);
  in.tableY = readDataCsv(o.y);
  if (in.tableX.values.rows() != in.tableY.values.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "row count mismatch: " + std::to_string(in.tableX.values.rows()) + " vs " +
                    std::to_string(in.tableY.values.rows()));
  }
  for (std::size_t i = 0; i < in.tableX.sampleIds.size(); ++i) {
    if (in.tableX.sampleIds[i] != in.tableY.sampleIds[i]) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "sample id mismatch on data row " + std::to_string(i + 1) + ": '" +
                      in.tableX.sampleIds[i] + "' vs '" + in.tableY.sampleIds[i] + "'");
    }
  }
  if (o.log10) {
    Matrix& v = in.tableY.values;
    for (Index j = 0; j < v.cols(); ++j) {
      for (Index i = 0; i < v.rows(); ++i) {
        if (!(v(i, j) > 0.0)) {
          throw Error(ErrorCode::kInvalidArgument,
                      "--log10 needs positive values; column '" +
                          in.tableY.featureNames[static_cast<std::size_t>(j)] + "', sample '" +
                          in.tableY.sampleIds[static_cast<std::size_t>(i)] + "'");
        }
        v(i, j) = std::log10(v(i, j));
      }
    }
  }
  in.x = standardizeNamed(in.tableX, "X");
  in.y = standardizeNamed(in.tableY, "Y");
  in.graphX = o.graphX.empty() ? FeatureGraph::empty(in.tableX.featureNames.size())
                               : loadEdgeList(o.graphX, in.tableX.featureNames);
  in.graphY = o.graphY.empty() ? FeatureGraph::empty(in.tableY.featureNames.size())
                               : loadEdgeList(o.graphY, in.tableY.featureNames);
  return in;
}

ordered_json vectorJson(const Vector& v) {
  ordered_json out = ordered_json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

ordered_json namesJson(const std::vector<Index>& indices, const std::vector<std::string>& names) {
  ordered_json out = ordered_json::array();
  for (Index i : indices) out.push_back(names[static_cast<std::size_t>(i)]);
  return out;
}

ordered_json modelJson(const CcaModel& model, const Inputs& in, const ordered_json& manifest) {
  ordered_json j;
  ordered_json components = ordered_json::array();
  for (std::size_t k = 0; k < model.components.size(); ++k) {
    const CcaComponent& c = model.components[k];
    ordered_json cj;
    cj["alpha"] = vectorJson(c.alpha);
    cj["beta"] = vectorJson(c.beta);
    cj["rho"] = c.rho;
    cj["iterations"] = c.iterations;
    cj["converged"] = c.converged;
    cj["trivial"] = c.trivial;
    cj["selectedX"] = namesJson(model.selectedX[k], in.tableX.featureNames);
    cj["selectedY"] = namesJson(model.selectedY[k], in.tableY.featureNames);
    components.push_back(cj);
  }
  j["components"] = components;
  const FitConfig& cfg = model.config;
  ordered_json config;
  config["penalty"] = std::string(to_string(cfg.penalty.family));
  config["constraint"] = std::string(to_string(cfg.penalty.constraint));
  config["eta"] = cfg.penalty.eta;
  config["gamma"] = cfg.penalty.gamma;
  config["tauX"] = cfg.tauX;
  config["tauY"] = cfg.tauY;
  config["components"] = cfg.components;
  config["maxOuterIterations"] = cfg.maxOuterIterations;
  config["convergenceTol"] = cfg.convergenceTol;
  config["solverTolerance"] = cfg.solver.tolerance;
  j["config"] = config;
  j["featuresX"] = in.tableX.featureNames;
  j["featuresY"] = in.tableY.featureNames;
  j["warnings"] = model.warnings;
  j["manifest"] = manifest;
  return j;
}

fs::path outputDir(const Options& o) {
  fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw Error(ErrorCode::kIo, "cannot create output directory " + o.out);
  return dir;
}

FitConfig fitConfig(const Options& o) {
  FitConfig cfg;
  cfg.penalty = penaltyConfig(o);
  cfg.components = o.components;
  cfg.maxOuterIterations = o.maxOuterIterations;
  return cfg;
}

bool trivialModel(const CcaModel& model) {
  return model.components.empty() || model.components.front().trivial;
}

void reportWarnings(const CcaModel& model, std::ostream& err) {
  for (const auto& w : model.warnings) err << "warning: " << w << "\n";
}

int cmdFit(const Options& o, std::ostream& out, std::ostream& err) {
  if (!o.tauX || !o.tauY) throw Error(ErrorCode::kInvalidArgument, "fit needs --tau-x and --tau-y");
  FitConfig cfg = fitConfig(o);
  cfg.tauX = *o.tauX;
  cfg.tauY = *o.tauY;
  cfg.validate();
  const Inputs in = loadInputs(o);
  const fs::path dir = outputDir(o);
  const CcaModel model = fit(in.x, in.y, in.graphX, in.graphY, cfg);
  const int threads = 1;
  writeFileAtomic(dir / "model.json", modelJson(model, in, manifestJson(o, threads)).dump(2) + "\n");
  out << "wrote " << (dir / "model.json").string() << "\n";
  reportWarnings(model, err);
  if (trivialModel(model)) {
    err << "warning: trivial solution (all-zero canonical vectors)\n";
    return kExitDegenerate;
  }
  return kExitOk;
}

std::string cvScoresCsv(const CvResult& cv) {
  std::string text = "phase,tauX,tauY,score,degenerate,foldsUsed,meanRhoTrain,meanRhoTest,chosen\n";
  for (const CvPoint& p : cv.points) {
    int used = 0;
    double train = 0.0;
    double test = 0.0;
    for (const FoldOutcome& f : p.folds) {
      if (f.failed) continue;
      ++used;
      train += std::abs(f.rhoTrain);
      test += std::abs(f.rhoTest);
    }
    if (used > 0) {
      train /= used;
      test /= used;
    }
    const bool chosen = p.tauX == cv.tauX && p.tauY == cv.tauY;
    text += std::to_string(p.phase) + "," + formatNumber(p.tauX) + "," + formatNumber(p.tauY) +
            "," + formatNumber(p.score) + "," + (p.degenerate ? "1" : "0") + "," +
            std::to_string(used) + "," + formatNumber(train) + "," + formatNumber(test) + "," +
            (chosen ? "1" : "0") + "\n";
  }
  return text;
}

int cmdCv(const Options& o, std::ostream& out, std::ostream& err) {
  FitConfig cfg = fitConfig(o);
  cfg.validate();
  const TuningMode mode = parseTuningMode(o.tuningMode);
  if (o.gridSize < 2 && !(o.tauX && o.tauY)) {
    throw Error(ErrorCode::kInvalidArgument, "--tau-grid-size must be >= 2");
  }
  const Inputs in = loadInputs(o);
  const Index n = in.x.rows();
  if (o.folds < 2 || o.folds > n) {
    throw Error(ErrorCode::kInvalidArgument, "--folds must lie in [2, n]; got " +
                                                 std::to_string(o.folds) + " with n = " +
                                                 std::to_string(n));
  }
  TauGrids grids;
  if (!(o.tauX && o.tauY)) {
    grids = defaultTauGrids(in.x, in.y, cfg.penalty.constraint, std::max(2, o.gridSize));
  }
  if (o.tauX) grids.x = {*o.tauX};
  if (o.tauY) grids.y = {*o.tauY};
  CvPlan plan = CvPlan::make(n, o.folds, o.seed, grids.x, grids.y);
  const int threads = resolveThreads(o.threads);
  plan.threads = threads;
  const fs::path dir = outputDir(o);
  const ordered_json manifest = manifestJson(o, threads);

  CcaModel model;
  std::string report;
  if (mode == TuningMode::kOnce) {
    const CvResult cv = crossSearch(in.x, in.y, in.graphX, in.graphY, cfg, plan);
    for (const auto& w : cv.warnings) err << "warning: " << w << "\n";
    cfg.tauX = cv.tauX;
    cfg.tauY = cv.tauY;
    report = cvScoresCsv(cv);
    model = fit(in.x, in.y, in.graphX, in.graphY, cfg);
  } else {
    std::vector<std::pair<double, double>> trace;
    const TauSelector selector = perIterationSelector(in.graphX, in.graphY, cfg, plan, &trace);
    model = fit(in.x, in.y, in.graphX, in.graphY, cfg, selector);
    report = "iteration,tauX,tauY\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
      report += std::to_string(i + 1) + "," + formatNumber(trace[i].first) + "," +
                formatNumber(trace[i].second) + "\n";
    }
    if (!trace.empty()) {
      model.config.tauX = trace.back().first;
      model.config.tauY = trace.back().second;
    }
  }
  writeFileAtomic(dir / "cv_scores.csv", report);
  writeFileAtomic(dir / "model.json", modelJson(model, in, manifest).dump(2) + "\n");
  out << "wrote " << (dir / "cv_scores.csv").string() << "\n";
  out << "wrote " << (dir / "model.json").string() << "\n";
  out << "tauX " << formatNumber(model.config.tauX) << " tauY " << formatNumber(model.config.tauY)
      << "\n";
  reportWarnings(model, err);
  if (trivialModel(model)) {
    err << "warning: trivial solution (all-zero canonical vectors)\n";
    return kExitDegenerate;
  }
  return kExitOk;
}

int cmdSimulate(const Options& o, std::ostream& out, std::ostream& err) {
  StudyConfig cfg;
  cfg.scenario.id = o.scenario;
  cfg.scenario.p = o.p;
  cfg.scenario.q = o.q;
  cfg.scenario.n = o.n;
  cfg.scenario.seed = o.seed;
  const PenaltyConfig penalty = penaltyConfig(o);
  const std::string variant(to_string(penalty.constraint));
  cfg.methods = {{std::string(to_string(penalty.family)) + "-" + variant, penalty, false},
                 {"l1-" + variant, penalty, true}};
  cfg.reps = o.reps;
  cfg.seed = o.seed;
  cfg.folds = o.folds;
  cfg.gridSize = o.gridSize;
  cfg.maxOuterIterations = o.maxOuterIterations;
  cfg.tuningMode = parseTuningMode(o.tuningMode);
  cfg.threads = resolveThreads(o.threads);
  cfg.shardIndex = o.shardIndex;
  cfg.shardCount = o.shardCount;
  cfg.recordTiming = o.recordTiming;
  cfg.validate();

  const fs::path dir = outputDir(o);
  const fs::path replicatesPath = dir / "replicates.csv";
  std::vector<ReplicateRow> previous;
  if (o.resume && fs::exists(replicatesPath)) {
    previous = parseReplicatesCsv(readFile(replicatesPath));
    out << "resuming with " << previous.size() << " rows from " << replicatesPath.string() << "\n";
  }
  std::mutex outMutex;
  const StudyResult result = runStudy(cfg, previous, [&](int r) {
    std::lock_guard<std::mutex> lock(outMutex);
    out << "replicate " << r << " done\n" << std::flush;
  });

  int assigned = 0;
  for (int r = 0; r < cfg.reps; ++r) assigned += r % cfg.shardCount == cfg.shardIndex ? 1 : 0;
  std::set<int> failed;
  for (const auto& row : result.rows) {
    if (row.status != "ok") {
      if (failed.insert(row.replicate).second) {
        err << "warning: replicate " << row.replicate << " " << row.method << ": " << row.status
            << "\n";
      }
    }
  }
  writeFileAtomic(replicatesPath, replicatesCsv(result.rows));
  writeFileAtomic(dir / "summary.csv", summaryCsv(result.summary));
  ordered_json manifest = manifestJson(o, cfg.threads);
  ordered_json seeds = ordered_json::array();
  for (int r = 0; r < cfg.reps; ++r) {
    if (r % cfg.shardCount != cfg.shardIndex) continue;
    const std::uint64_t s = replicateSeed(cfg.seed, r);
    seeds.push_back({{"replicate", r},
                     {"seed", s},
                     {"dataSeed", deriveSeed(s, 0)},
                     {"foldSeed", deriveSeed(s, 1)}});
  }
  manifest["replicateSeeds"] = seeds;
  ordered_json methods = ordered_json::array();
  for (const auto& m : cfg.methods) {
    methods.push_back({{"name", m.name}, {"emptyGraph", m.emptyGraph}});
  }
  manifest["methods"] = methods;
  writeFileAtomic(dir / "manifest.json", manifest.dump(2) + "\n");
  out << "wrote " << replicatesPath.string() << ", " << (dir / "summary.csv").string() << ", "
      << (dir / "manifest.json").string() << "\n";

  const int completed = assigned - static_cast<int>(failed.size());
  if (assigned > 0 && 5 * completed < 4 * assigned) {
    err << "error: only " << completed << " of " << assigned << " replicates completed\n";
    return kExitPartial;
  }
  return kExitOk;
}

int exitCodeFor(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kAllDegenerate:
    case ErrorCode::kDegenerateGrid:
      return kExitDegenerate;
    default:
      return kExitUsage;
  }
}

void addModelOptions(CLI::App* app, Options& o) {
  app->add_option("--penalty", o.penalty, "grouped|fused")->capture_default_str();
  app->add_option("--constraint", o.constraint, "A|B")->capture_default_str();
  app->add_option("--eta", o.eta, "singleton (l1) share in [0, 1)")->capture_default_str();
  app->add_option("--gamma", o.gamma, "grouped penalty exponent, > 1")->capture_default_str();
  app->add_option("--tau-x", o.tauX, "constraint level for X (fixes the X grid in cv)");
  app->add_option("--tau-y", o.tauY, "constraint level for Y (fixes the Y grid in cv)");
  app->add_option("--max-outer", o.maxOuterIterations, "outer alternation limit")
      ->capture_default_str();
  app->add_option("--seed", o.seed, "random seed")->capture_default_str();
  app->add_option("--out", o.out, "output directory")->capture_default_str();
}

void addDataOptions(CLI::App* app, Options& o) {
  app->add_option("--x", o.x, "X data CSV (ids in the first column, names in the first row)");
  app->add_option("--y", o.y, "Y data CSV, rows paired with X");
  app->add_option("--graph-x", o.graphX, "edge list over X features (default: no edges)");
  app->add_option("--graph-y", o.graphY, "edge list over Y features (default: no edges)");
  app->add_option("--components", o.components, "number of canonical pairs")
      ->capture_default_str();
  app->add_flag("--log10", o.log10, "log10-transform Y before standardizing");
}

void addTuningOptions(CLI::App* app, Options& o) {
  app->add_option("--tau-grid-size", o.gridSize, "points per tau grid")->capture_default_str();
  app->add_option("--folds", o.folds, "cross-validation folds")->capture_default_str();
  app->add_option("--tuning-mode", o.tuningMode, "once|per-iteration")->capture_default_str();
  app->add_option("--threads", o.threads, "workers (0: all cores, capped by NETCCA_THREADS)")
      ->capture_default_str();
}

}  // namespace

int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  for (int i = 1; i < argc; ++i) o.arguments.emplace_back(argv[i]);

  CLI::App app("Network-structured sparse canonical correlation analysis", "netcca");
  app.set_version_flag("--version", std::string(NETCCA_VERSION));
  app.require_subcommand(1);
  CLI::App* fitCmd = app.add_subcommand("fit", "fit canonical pairs at fixed tau");
  CLI::App* cvCmd = app.add_subcommand("cv", "select tau by cross-validation, then fit");
  CLI::App* simCmd = app.add_subcommand("simulate", "run a seeded simulation study");
  for (CLI::App* sub : {fitCmd, cvCmd, simCmd}) addModelOptions(sub, o);
  addDataOptions(fitCmd, o);
  addDataOptions(cvCmd, o);
  addTuningOptions(cvCmd, o);
  addTuningOptions(simCmd, o);
  simCmd->add_option("--scenario", o.scenario, "1-4")->capture_default_str();
  simCmd->add_option("--reps", o.reps, "replicates")->capture_default_str();
  simCmd->add_option("--p", o.p, "X dimension")->capture_default_str();
  simCmd->add_option("--q", o.q, "Y dimension")->capture_default_str();
  simCmd->add_option("--n", o.n, "sample size")->capture_default_str();
  simCmd->add_flag("--record-timing", o.recordTiming,
                   "fill the runtime column (output is then not reproducible)");
  simCmd->add_option("--shard-index", o.shardIndex, "this worker's shard")->capture_default_str();
  simCmd->add_option("--shard-count", o.shardCount, "number of shards")->capture_default_str();
  simCmd->add_flag("--resume", o.resume, "keep finished replicates from an earlier replicates.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  o.command = app.get_subcommands().front()->get_name();

  try {
    if (o.command == "fit") return cmdFit(o, out, err);
    if (o.command == "cv") return cmdCv(o, out, err);
    return cmdSimulate(o, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exitCodeFor(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace netcca
