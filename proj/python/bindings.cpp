#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "netcca/error.hpp"
#include "netcca/graph.hpp"
#include "netcca/linalg.hpp"
#include "netcca/penalty.hpp"
#include "netcca/scca.hpp"
#include "netcca/simgen.hpp"
#include "netcca/solver.hpp"
#include "netcca/tuning.hpp"

namespace py = pybind11;
using namespace netcca;

namespace {

using EdgeList = std::vector<std::pair<std::size_t, std::size_t>>;

PenaltyConfig penaltyConfig(const std::string& penalty, const std::string& constraint, double eta,
                            double gamma) {
  PenaltyConfig cfg{parsePenaltyFamily(penalty), parseConstraintVariant(constraint), eta, gamma};
  cfg.validate();
  return cfg;
}

FeatureGraph graphFor(const std::optional<EdgeList>& edges, Index p) {
  return FeatureGraph::build(static_cast<std::size_t>(p), edges ? *edges : EdgeList{});
}

DataMatrix prepare(const Matrix& m, bool doStandardize) {
  if (doStandardize) return standardize(m);
  DataMatrix d;
  d.values = m;
  d.columnMeans = Vector::Zero(m.cols());
  d.columnSds = Vector::Ones(m.cols());
  return d;
}

py::dict modelDict(const CcaModel& model, Index p, Index q) {
  const auto k = static_cast<Index>(model.components.size());
  Matrix alpha(p, k);
  Matrix beta(q, k);
  py::list rho, iterations, converged, trivial;
  for (Index c = 0; c < k; ++c) {
    const CcaComponent& comp = model.components[static_cast<std::size_t>(c)];
    alpha.col(c) = comp.alpha;
    beta.col(c) = comp.beta;
    rho.append(comp.rho);
    iterations.append(comp.iterations);
    converged.append(comp.converged);
    trivial.append(comp.trivial);
  }
  py::dict out;
  out["alpha"] = alpha;
  out["beta"] = beta;
  out["rho"] = rho;
  out["iterations"] = iterations;
  out["converged"] = converged;
  out["trivial"] = trivial;
  out["selected_x"] = model.selectedX;
  out["selected_y"] = model.selectedY;
  out["tau_x"] = model.config.tauX;
  out["tau_y"] = model.config.tauY;
  out["warnings"] = model.warnings;
  return out;
}

py::dict metricsDict(const SelectionMetrics& m) {
  py::dict d;
  d["tp"] = m.tp;
  d["fp"] = m.fp;
  d["tn"] = m.tn;
  d["fn"] = m.fn;
  d["sensitivity"] = m.sensitivity;
  d["specificity"] = m.specificity;
  d["mcc"] = m.mcc;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Network-structured sparse canonical correlation analysis.";
  py::register_exception<Error>(m, "NetccaError", PyExc_ValueError);
  m.attr("__version__") = NETCCA_VERSION;

  m.def(
      "fit",
      [](const Matrix& x, const Matrix& y, double tauX, double tauY,
         const std::optional<EdgeList>& graphX, const std::optional<EdgeList>& graphY,
         const std::string& penalty, const std::string& constraint, double eta, double gamma,
         int components, int maxOuterIterations, bool doStandardize) {
        FitConfig cfg;
        cfg.penalty = penaltyConfig(penalty, constraint, eta, gamma);
        cfg.tauX = tauX;
        cfg.tauY = tauY;
        cfg.components = components;
        cfg.maxOuterIterations = maxOuterIterations;
        const DataMatrix dx = prepare(x, doStandardize);
        const DataMatrix dy = prepare(y, doStandardize);
        CcaModel model;
        {
          py::gil_scoped_release release;
          model = netcca::fit(dx, dy, graphFor(graphX, x.cols()), graphFor(graphY, y.cols()), cfg);
        }
        return modelDict(model, x.cols(), y.cols());
      },
      py::arg("x"), py::arg("y"), py::arg("tau_x"), py::arg("tau_y"),
      py::arg("graph_x") = py::none(), py::arg("graph_y") = py::none(),
      py::arg("penalty") = "fused", py::arg("constraint") = "B", py::arg("eta") = 0.5,
      py::arg("gamma") = 2.0, py::arg("components") = 1, py::arg("max_outer_iterations") = 20,
      py::arg("standardize") = true,
      "Fit K canonical pairs at fixed (tau_x, tau_y). Graphs are lists of 0-based index pairs.");

  m.def(
      "cross_validate",
      [](const Matrix& x, const Matrix& y, const std::optional<EdgeList>& graphX,
         const std::optional<EdgeList>& graphY, const std::string& penalty,
         const std::string& constraint, double eta, double gamma, int folds, int gridSize,
         std::uint64_t seed, std::optional<std::vector<double>> tauXGrid,
         std::optional<std::vector<double>> tauYGrid, int threads) {
        FitConfig cfg;
        cfg.penalty = penaltyConfig(penalty, constraint, eta, gamma);
        const DataMatrix dx = standardize(x);
        const DataMatrix dy = standardize(y);
        TauGrids grids;
        if (!tauXGrid || !tauYGrid) grids = defaultTauGrids(dx, dy, cfg.penalty.constraint, gridSize);
        if (tauXGrid) grids.x = *tauXGrid;
        if (tauYGrid) grids.y = *tauYGrid;
        CvPlan plan = CvPlan::make(x.rows(), folds, seed, grids.x, grids.y);
        plan.threads = threads;
        CvResult cv;
        {
          py::gil_scoped_release release;
          cv = crossSearch(dx, dy, graphFor(graphX, x.cols()), graphFor(graphY, y.cols()), cfg,
                           plan);
        }
        py::list points;
        for (const CvPoint& p : cv.points) {
          py::dict d;
          d["tau_x"] = p.tauX;
          d["tau_y"] = p.tauY;
          d["score"] = p.score;
          d["degenerate"] = p.degenerate;
          d["phase"] = p.phase;
          py::list train, test, trivial;
          for (const FoldOutcome& f : p.folds) {
            train.append(f.rhoTrain);
            test.append(f.rhoTest);
            trivial.append(f.trivial);
          }
          d["rho_train"] = train;
          d["rho_test"] = test;
          d["trivial"] = trivial;
          points.append(d);
        }
        py::dict out;
        out["tau_x"] = cv.tauX;
        out["tau_y"] = cv.tauY;
        out["points"] = points;
        out["warnings"] = cv.warnings;
        out["tau_x_grid"] = grids.x;
        out["tau_y_grid"] = grids.y;
        return out;
      },
      py::arg("x"), py::arg("y"), py::arg("graph_x") = py::none(),
      py::arg("graph_y") = py::none(), py::arg("penalty") = "fused", py::arg("constraint") = "B",
      py::arg("eta") = 0.5, py::arg("gamma") = 2.0, py::arg("folds") = 5,
      py::arg("grid_size") = 8, py::arg("seed") = 1, py::arg("tau_x_grid") = py::none(),
      py::arg("tau_y_grid") = py::none(), py::arg("threads") = 1,
      "Cross-search over (tau_x, tau_y) on standardized data.");

  m.def(
      "default_tau_grids",
      [](const Matrix& x, const Matrix& y, const std::string& constraint, int size) {
        const TauGrids g =
            defaultTauGrids(standardize(x), standardize(y), parseConstraintVariant(constraint), size);
        return std::make_pair(g.x, g.y);
      },
      py::arg("x"), py::arg("y"), py::arg("constraint") = "B", py::arg("size") = 8);

  m.def(
      "canonical_correlation",
      [](const Matrix& x, const Matrix& y, const Vector& alpha, const Vector& beta) {
        return canonicalCorrelation(x, y, alpha, beta);
      },
      py::arg("x"), py::arg("y"), py::arg("alpha"), py::arg("beta"));

  m.def(
      "solve_subproblem",
      [](const Vector& rhs, double tau, const std::optional<EdgeList>& edges,
         const std::string& penalty, double eta, double scale, bool reference) {
        PenaltyConfig cfg = penaltyConfig(penalty, "B", eta, 2.0);
        ConstraintData cd;
        cd.rhs = rhs;
        cd.tau = tau;
        cd.op = ConstraintOperator::scaledIdentity(rhs.size(), scale);
        const ConvexProgram program = compileSubproblem(cfg, graphFor(edges, rhs.size()), cd);
        const Solution s = reference ? referenceSolve(program) : solve(program);
        py::dict out;
        out["x"] = s.primal;
        out["objective"] = s.objective;
        out["status"] = std::string(to_string(s.status));
        out["iterations"] = s.iterations;
        return out;
      },
      py::arg("rhs"), py::arg("tau"), py::arg("edges") = py::none(), py::arg("penalty") = "fused",
      py::arg("eta") = 0.5, py::arg("scale") = 1.0, py::arg("reference") = false,
      "minimize the graph penalty of v subject to |rhs - scale * v|_inf <= tau.");

  py::class_<GroundTruth>(m, "Scenario")
      .def(py::init([](int id, Index p, Index q, Index n, std::uint64_t seed) {
             ScenarioSpec spec;
             spec.id = id;
             spec.p = p;
             spec.q = q;
             spec.n = n;
             spec.seed = seed;
             return buildScenario(spec);
           }),
           py::arg("id") = 2, py::arg("p") = 100, py::arg("q") = 100, py::arg("n") = 80,
           py::arg("seed") = 1)
      .def_property_readonly("sigma", [](const GroundTruth& t) { return t.sigma; })
      .def_property_readonly("true_alpha", [](const GroundTruth& t) { return t.trueAlpha; })
      .def_property_readonly("true_beta", [](const GroundTruth& t) { return t.trueBeta; })
      .def_property_readonly("correlations", [](const GroundTruth& t) { return t.correlations; })
      .def_property_readonly("support_x", [](const GroundTruth& t) { return t.supportX; })
      .def_property_readonly("support_y", [](const GroundTruth& t) { return t.supportY; })
      .def_property_readonly("graph_x", [](const GroundTruth& t) { return t.graphX.edges; })
      .def_property_readonly("graph_y", [](const GroundTruth& t) { return t.graphY.edges; })
      .def(
          "sample",
          [](const GroundTruth& t, Index n, std::uint64_t seed) { return sampleMvn(t, n, seed); },
          py::arg("n"), py::arg("seed"), "n joint normal draws, returned as (X, Y).");

  m.def(
      "selection_metrics",
      [](const std::vector<Index>& selected, const std::vector<Index>& support, Index total) {
        return metricsDict(selectionMetrics(selected, support, total));
      },
      py::arg("selected"), py::arg("support"), py::arg("total"));

  m.def(
      "run_study",
      [](int scenario, int reps, Index p, Index q, Index n, std::uint64_t seed, int folds,
         int gridSize, int maxOuterIterations, const std::string& tuningMode, int threads) {
        StudyConfig cfg;
        cfg.scenario.id = scenario;
        cfg.scenario.p = p;
        cfg.scenario.q = q;
        cfg.scenario.n = n;
        cfg.scenario.seed = seed;
        cfg.methods = defaultMethods();
        cfg.reps = reps;
        cfg.seed = seed;
        cfg.folds = folds;
        cfg.gridSize = gridSize;
        cfg.maxOuterIterations = maxOuterIterations;
        cfg.tuningMode = parseTuningMode(tuningMode);
        cfg.threads = threads;
        StudyResult result;
        {
          py::gil_scoped_release release;
          result = runStudy(cfg);
        }
        py::list rows;
        for (const ReplicateRow& r : result.rows) {
          py::dict d = metricsDict(r.metrics);
          d["replicate"] = r.replicate;
          d["method"] = r.method;
          d["side"] = std::string(1, r.side);
          d["component"] = r.component;
          d["rho_hat"] = r.rhoHat;
          d["tau_x"] = r.tauX;
          d["tau_y"] = r.tauY;
          d["status"] = r.status;
          rows.append(d);
        }
        py::dict out;
        out["rows"] = rows;
        out["replicates_csv"] = replicatesCsv(result.rows);
        out["summary_csv"] = summaryCsv(result.summary);
        return out;
      },
      py::arg("scenario") = 2, py::arg("reps") = 1, py::arg("p") = 100, py::arg("q") = 100,
      py::arg("n") = 80, py::arg("seed") = 1, py::arg("folds") = 5, py::arg("grid_size") = 8,
      py::arg("max_outer_iterations") = 20, py::arg("tuning_mode") = "once",
      py::arg("threads") = 1,
      "Seeded study comparing the fused graph penalty with its empty-graph ablation.");
}
