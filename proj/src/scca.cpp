#include "netcca/scca.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <tuple>

namespace netcca {

void FitConfig::validate() const {
  penalty.validate();
  solver.validate();
  if (!(std::isfinite(tauX) && tauX >= 0.0) || !(std::isfinite(tauY) && tauY >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tau values must be finite and >= 0");
  }
  if (maxOuterIterations < 1) {
    throw Error(ErrorCode::kInvalidArgument, "maxOuterIterations must be >= 1");
  }
  if (!(convergenceTol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "convergenceTol must be positive");
  }
  if (components < 1) throw Error(ErrorCode::kInvalidArgument, "components must be >= 1");
}

void FitConfig::validate(Index n, Index p, Index q) const {
  validate();
  const Index limit = std::min({n - 1, p, q});
  if (components > limit) {
    throw Error(ErrorCode::kInvalidArgument,
                "components (" + std::to_string(components) + ") exceeds min(n - 1, p, q) = " +
                    std::to_string(limit));
  }
}

double canonicalCorrelation(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Matrix>& y,
                            const Eigen::Ref<const Vector>& alpha,
                            const Eigen::Ref<const Vector>& beta) {
  if (x.cols() != alpha.size() || y.cols() != beta.size() || x.rows() != y.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "canonicalCorrelation: dimension mismatch");
  }
  Vector u = x * alpha;
  Vector v = y * beta;
  u.array() -= u.mean();
  v.array() -= v.mean();
  const double su = u.norm();
  const double sv = v.norm();
  if (su == 0.0 || sv == 0.0) return 0.0;
  return std::clamp(u.dot(v) / (su * sv), -1.0, 1.0);
}

std::vector<Index> selectedIndices(const Eigen::Ref<const Vector>& v) {
  std::vector<Index> out;
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > kSelectionThreshold) out.push_back(i);
  }
  return out;
}

Vector subproblemRhs(const DataMatrix& x, const DataMatrix& y, const RegCovOperator& opX,
                     ConstraintVariant variant, const Eigen::Ref<const Vector>& beta) {
  const double denom = static_cast<double>(x.rows() - 1);
  Vector sxyBeta = x.values.transpose() * (y.values * beta) / denom;
  if (variant == ConstraintVariant::kA) return sxyBeta;
  return opX.inverseTimes(sxyBeta);
}

namespace {

using OperatorPtr = std::shared_ptr<const RegCovOperator>;

// One side of the alternation: solves for v given the other side's current
// vector, returning the raw (unnormalized) solution.
class SideSolver {
 public:
  SideSolver(const DataMatrix& self, const DataMatrix& other, const FeatureGraph& graph,
             OperatorPtr op, const FitConfig& cfg)
      : self_(self), other_(other), graph_(graph), op_(std::move(op)), cfg_(cfg) {}

  Vector solve(const Vector& otherVector, double rho, double tau) {
    const ConstraintVariant variant = cfg_.penalty.constraint;
    ConstraintData cd;
    cd.rhs = subproblemRhs(self_, other_, *op_, variant, otherVector);
    cd.tau = tau;
    cd.op = variant == ConstraintVariant::kA
                ? ConstraintOperator::scaledCovariance(op_, rho)
                : ConstraintOperator::scaledIdentity(self_.cols(), rho);
    const ConvexProgram program = compileSubproblem(cfg_.penalty, graph_, cd);
    const Vector* warm = warm_.size() == self_.cols() ? &warm_ : nullptr;
    const Solution s = netcca::solve(program, cfg_.solver, warm);
    if (s.status == SolveStatus::kInfeasible) {
      warm_.resize(0);
      return Vector::Zero(self_.cols());
    }
    warm_ = s.primal;
    return s.primal;
  }

 private:
  const DataMatrix& self_;
  const DataMatrix& other_;
  const FeatureGraph& graph_;
  OperatorPtr op_;
  const FitConfig& cfg_;
  Vector warm_;
};

// Unit-normalizes in place; returns false (and zeroes v) for a null vector.
bool normalize(Vector& v) {
  const double norm = v.norm();
  if (!(norm > 1e-300) || v.cwiseAbs().maxCoeff() <= 1e-14 * norm) {
    v.setZero();
    return false;
  }
  v /= norm;
  return true;
}

double alignedChange(const Vector& current, const Vector& previous) {
  const double sign = current.dot(previous) < 0.0 ? -1.0 : 1.0;
  return (current - sign * previous).lpNorm<Eigen::Infinity>();
}

CcaComponent fitWithOperators(const DataMatrix& x, const DataMatrix& y, const FeatureGraph& gx,
                              const FeatureGraph& gy, const FitConfig& cfg,
                              const NonsparseTriple& init, const TauSelector& selector,
                              OperatorPtr opX, OperatorPtr opY) {
  if (gx.nodeCount != static_cast<std::size_t>(x.cols()) ||
      gy.nodeCount != static_cast<std::size_t>(y.cols())) {
    throw Error(ErrorCode::kDimensionMismatch, "graph size does not match data columns");
  }
  if (init.alpha.size() != x.cols() || init.beta.size() != y.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "initial vectors do not match data columns");
  }
  SideSolver alphaSide(x, y, gx, std::move(opX), cfg);
  SideSolver betaSide(y, x, gy, std::move(opY), cfg);

  CcaComponent out;
  Vector alpha = init.alpha;
  Vector beta = init.beta;
  double rho = init.rho;
  double tauX = cfg.tauX;
  double tauY = cfg.tauY;
  for (int it = 1; it <= cfg.maxOuterIterations; ++it) {
    if (selector) {
      OuterState state{&x, &y, alpha, beta, rho, it};
      std::tie(tauX, tauY) = selector(state);
    }
    Vector nextAlpha = alphaSide.solve(beta, rho, tauX);
    const bool alphaNonzero = normalize(nextAlpha);
    Vector nextBeta = alphaNonzero ? betaSide.solve(nextAlpha, rho, tauY) : Vector::Zero(y.cols());
    const bool betaNonzero = normalize(nextBeta);
    out.iterations = it;
    if (!alphaNonzero || !betaNonzero) {
      // One zero side forces the other to zero on the next pass (its rhs or
      // its correlation vanishes), so stop at the trivial solution now.
      out.alpha = Vector::Zero(x.cols());
      out.beta = Vector::Zero(y.cols());
      out.rho = 0.0;
      out.trivial = true;
      out.converged = true;
      out.rhoTrace.push_back(0.0);
      return out;
    }
    const double change = std::max(alignedChange(nextAlpha, alpha), alignedChange(nextBeta, beta));
    alpha = std::move(nextAlpha);
    beta = std::move(nextBeta);
    rho = canonicalCorrelation(x.values, y.values, alpha, beta);
    out.rhoTrace.push_back(rho);
    if (change <= cfg.convergenceTol) {
      out.converged = true;
      break;
    }
  }
  canonicalizeSign(alpha, beta);
  out.alpha = std::move(alpha);
  out.beta = std::move(beta);
  out.rho = rho;
  return out;
}

}  // namespace

CcaComponent fitComponent(const DataMatrix& x, const DataMatrix& y, const FeatureGraph& gx,
                          const FeatureGraph& gy, const FitConfig& cfg,
                          const NonsparseTriple& init, const TauSelector& selector) {
  cfg.validate();
  if (x.rows() != y.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "row count mismatch: " + std::to_string(x.rows()) +
                                                   " vs " + std::to_string(y.rows()));
  }
  return fitWithOperators(x, y, gx, gy, cfg, init, selector,
                          std::make_shared<const RegCovOperator>(x),
                          std::make_shared<const RegCovOperator>(y));
}

CcaModel fit(const DataMatrix& x, const DataMatrix& y, const FeatureGraph& gx,
             const FeatureGraph& gy, const FitConfig& cfg, const TauSelector& selector) {
  if (x.rows() != y.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "row count mismatch: " + std::to_string(x.rows()) +
                                                   " vs " + std::to_string(y.rows()));
  }
  cfg.validate(x.rows(), x.cols(), y.cols());
  CcaModel model;
  model.config = cfg;
  Matrix alphas(x.cols(), 0);
  Matrix betas(y.cols(), 0);
  for (int k = 1; k <= cfg.components; ++k) {
    const DataMatrix xk = k == 1 ? x : deflate(x, alphas);
    const DataMatrix yk = k == 1 ? y : deflate(y, betas);
    auto opX = std::make_shared<const RegCovOperator>(xk);
    auto opY = std::make_shared<const RegCovOperator>(yk);
    const NonsparseTriple init = nonsparseInit(*opX, *opY, 1);
    if (init.rho == 0.0) {
      model.warnings.push_back("component " + std::to_string(k) +
                               ": no remaining cross-covariance; stopping");
      break;
    }
    CcaComponent component = fitWithOperators(xk, yk, gx, gy, cfg, init, selector, opX, opY);
    const bool trivial = component.trivial;
    if (!component.converged) {
      model.warnings.push_back("component " + std::to_string(k) +
                               ": outer iterations did not converge");
    }
    model.selectedX.push_back(selectedIndices(component.alpha));
    model.selectedY.push_back(selectedIndices(component.beta));
    alphas.conservativeResize(Eigen::NoChange, k);
    betas.conservativeResize(Eigen::NoChange, k);
    alphas.col(k - 1) = component.alpha;
    betas.col(k - 1) = component.beta;
    model.components.push_back(std::move(component));
    if (trivial) {
      model.warnings.push_back("component " + std::to_string(k) +
                               ": trivial (all-zero) solution; tau may be too large");
      break;
    }
  }
  return model;
}

}  // namespace netcca
