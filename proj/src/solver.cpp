#include "netcca/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/SparseCholesky>

namespace netcca {

void SolverSettings::validate() const {
  if (!(tolerance > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "solver tolerance must be positive");
  }
  if (maxIterations < 1) {
    throw Error(ErrorCode::kInvalidArgument, "solver maxIterations must be >= 1");
  }
  if (!(relaxation > 0.0 && relaxation < 2.0)) {
    throw Error(ErrorCode::kInvalidArgument, "relaxation must lie in (0, 2)");
  }
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kMaxIterations:
      return "maxIterations";
    case SolveStatus::kInfeasible:
      return "infeasible";
  }
  return "unknown";
}

namespace {

using SparseCol = Eigen::SparseMatrix<double>;

double infNorm(const Eigen::Ref<const Vector>& v) {
  return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0;
}

Solution zeroSolution(Index p) {
  Solution s;
  s.primal = Vector::Zero(p);
  s.objective = 0.0;
  s.status = SolveStatus::kOptimal;
  return s;
}

Solution infeasibleSolution(Index p) {
  Solution s;
  s.primal = Vector::Zero(p);
  s.objective = std::numeric_limits<double>::infinity();
  s.status = SolveStatus::kInfeasible;
  s.kktResidual = std::numeric_limits<double>::infinity();
  return s;
}

// ADMM on
//   minimize sum_k w_k ||z_k||  +  indicator_[l, u](z_A)
//   subject to  z_D = D x,  z_A = A x
// with D and A rescaled so both row blocks have comparable magnitude. The
// x-update solves (D^T D + A^T A) x = D^T a + A^T b, which does not depend on
// the ADMM penalty, so the factorization is built once per program.
class AdmmWorkspace {
 public:
  explicit AdmmWorkspace(const ConvexProgram& program) : program_(program) {
    p_ = program.originalCount;
    m_ = program.splitting.rows();
    buildScaledSplitting();
    buildConstraintScaling();
    factorize();
  }

  Solution run(const SolverSettings& settings, const Vector* warmStart) {
    const double tol = settings.tolerance;
    const double relax = settings.relaxation;

    Vector x = warmStart && warmStart->size() == p_ ? *warmStart : Vector::Zero(p_);
    Vector mx(m_ + p_);
    applyM(x, mx);
    Vector z = mx;
    z.tail(p_) = z.tail(p_).cwiseMax(lowerScaled_).cwiseMin(upperScaled_);
    Vector u = Vector::Zero(m_ + p_);
    Vector zPrev(m_ + p_);
    Vector v(m_ + p_);
    Vector rhs(p_);
    Vector diff(m_ + p_);
    Vector mtDiff(p_);
    double sigma = 1.0;

    Solution out;
    bool converged = false;
    double primalNormalized = 0.0;
    double dualNormalized = 0.0;
    int it = 0;
    int nextBalance = 20;
    int nextPolish = 100;
    for (it = 1; it <= settings.maxIterations; ++it) {
      diff = z - u;
      applyMt(diff, rhs);
      x = solveSystem(rhs);
      applyM(x, mx);

      zPrev = z;
      v = relax * mx + (1.0 - relax) * zPrev + u;
      proxBlocks(v, sigma, z);
      z.tail(p_) = v.tail(p_).cwiseMax(lowerScaled_).cwiseMin(upperScaled_);
      u = v - z;

      const double primal = infNorm(mx - z);
      diff = z - zPrev;
      applyMt(diff, mtDiff);
      const double dual = sigma * infNorm(mtDiff);
      const double primalScale = 1.0 + std::max(infNorm(mx), infNorm(z));
      const double dualScale = 1.0 + sigma * infNorm(u);
      primalNormalized = primal / primalScale;
      dualNormalized = dual / dualScale;

      if (settings.verbosity > 0 && it % settings.verbosity == 0) {
        std::fprintf(stderr, "admm %6d  primal %.3e  dual %.3e  sigma %.3e\n", it,
                     primalNormalized, dualNormalized, sigma);
      }
      if (primalNormalized <= tol && dualNormalized <= tol) {
        converged = true;
        break;
      }
      if (it == nextPolish) {
        nextPolish *= 2;
        if (auto polished = polish(x, z, tol)) {
          polished->iterations = it;
          return *polished;
        }
      }
      // Residual balancing on a doubling schedule so the penalty settles.
      if (it == nextBalance && dualNormalized > 0.0 && primalNormalized > 0.0) {
        nextBalance *= 2;
        const double ratio = primalNormalized / dualNormalized;
        if (ratio > 5.0 || ratio < 0.2) {
          const double factor = std::clamp(std::sqrt(ratio), 0.1, 10.0);
          sigma *= factor;
          u /= factor;
        }
      }
    }

    if (auto polished = polish(x, z, tol)) {
      polished->iterations = std::min(it, settings.maxIterations);
      return *polished;
    }
    out.iterations = std::min(it, settings.maxIterations);
    out.kktResidual = std::max(primalNormalized, dualNormalized);
    out.status = converged ? SolveStatus::kOptimal : SolveStatus::kMaxIterations;
    out.primal = finalize(x, tol);
    out.objective = program_.objective(out.primal);
    return out;
  }

 private:
  void buildScaledSplitting() {
    Eigen::SparseMatrix<double, Eigen::RowMajor> d = program_.splitting;
    weights_.resize(static_cast<Index>(program_.blocks.size()));
    for (std::size_t k = 0; k < program_.blocks.size(); ++k) {
      const auto& block = program_.blocks[k];
      double rowNorm = 0.0;
      for (Index r = block.firstRow; r < block.firstRow + block.rowCount; ++r) {
        rowNorm = std::max(rowNorm, d.row(r).norm());
      }
      const double scale = rowNorm > 0.0 ? 1.0 / rowNorm : 1.0;
      for (Index r = block.firstRow; r < block.firstRow + block.rowCount; ++r) {
        d.row(r) *= scale;
      }
      weights_(static_cast<Index>(k)) = block.weight / scale;
    }
    d_ = d;
    dt_ = SparseCol(d.transpose());
  }

  void buildConstraintScaling() {
    const auto& op = program_.constraint;
    const double s = std::abs(op.scale());
    double typical = 1.0;
    if (const auto* cov = op.covariance()) {
      typical = cov->ridge() + cov->eigenvalues().sum() / static_cast<double>(p_);
    }
    kappa_ = 1.0 / (s * typical);
    lowerScaled_ = kappa_ * program_.lower;
    upperScaled_ = kappa_ * program_.upper;
  }

  void factorize() {
    const auto& op = program_.constraint;
    const double a = kappa_ * op.scale();
    SparseCol dtd = dt_ * d_;
    const auto* cov = op.covariance();
    if (!cov) {
      SparseCol k = dtd;
      SparseCol eye(p_, p_);
      eye.setIdentity();
      k += (a * a) * eye;
      sparse_.compute(k);
      requireFactorization(sparse_.info());
      return;
    }
    const double r = cov->ridge();
    if (r <= 0.0) {
      // Full-rank covariance without ridge: only reachable for tiny p.
      const Matrix aDense = kappa_ * op.dense();
      Matrix k = Matrix(dtd) + aDense.transpose() * aDense;
      dense_.compute(k);
      useDense_ = true;
      return;
    }
    SparseCol eye(p_, p_);
    eye.setIdentity();
    SparseCol b = dtd + (a * a * r * r) * eye;
    sparse_.compute(b);
    requireFactorization(sparse_.info());
    // (S + rI)^2 = V (L^2 + 2 r L) V^T + r^2 I
    const Vector& lambda = cov->eigenvalues();
    const Vector gammaRoot =
        (a * a * (lambda.array().square() + 2.0 * r * lambda.array())).sqrt();
    lowRank_ = cov->basis() * gammaRoot.asDiagonal();
    solvedLowRank_ = sparse_.solve(lowRank_);
    const Index rank = lowRank_.cols();
    Matrix capacitance = Matrix::Identity(rank, rank) + lowRank_.transpose() * solvedLowRank_;
    capacitance_.compute(capacitance);
  }

  static void requireFactorization(Eigen::ComputationInfo info) {
    if (info != Eigen::Success) {
      throw Error(ErrorCode::kRankDeficient, "ADMM system matrix is not positive definite");
    }
  }

  Vector solveSystem(const Vector& rhs) const {
    if (useDense_) return dense_.solve(rhs);
    Vector x = sparse_.solve(rhs);
    if (lowRank_.cols() > 0) {
      const Vector coeff = capacitance_.solve(lowRank_.transpose() * x);
      x -= solvedLowRank_ * coeff;
    }
    return x;
  }

  void applyM(const Vector& x, Vector& out) const {
    out.head(m_) = d_ * x;
    out.tail(p_) = kappa_ * program_.constraint.apply(x);
  }

  void applyMt(const Vector& y, Vector& out) const {
    out = dt_ * y.head(m_);
    out += kappa_ * program_.constraint.applyTranspose(y.tail(p_));
  }

  void proxBlocks(const Vector& v, double sigma, Vector& z) const {
    for (std::size_t k = 0; k < program_.blocks.size(); ++k) {
      const auto& block = program_.blocks[k];
      const double threshold = weights_(static_cast<Index>(k)) / sigma;
      auto in = v.segment(block.firstRow, block.rowCount);
      auto target = z.segment(block.firstRow, block.rowCount);
      const double norm = in.norm();
      if (norm <= threshold) {
        target.setZero();
      } else {
        target = (1.0 - threshold / norm) * in;
      }
    }
  }

  // Active-set polish. Blocks whose split variable is exactly zero and
  // constraints clamped at a bound are taken as active; x is projected onto
  // that face and accepted only if it is feasible and a dual certificate for
  // it exists (stationarity with bounded block multipliers and correctly
  // signed constraint multipliers).
  std::optional<Solution> polish(const Vector& x, const Vector& z, double tol) {
    if (p_ > kMaxPolishDimension) return std::nullopt;
    std::vector<std::size_t> zeroBlocks;
    std::vector<Index> activeRows;
    for (std::size_t k = 0; k < program_.blocks.size(); ++k) {
      const auto& block = program_.blocks[k];
      if (z.segment(block.firstRow, block.rowCount).isZero(0.0)) zeroBlocks.push_back(k);
    }
    std::vector<int> side;
    for (Index i = 0; i < p_; ++i) {
      const double zi = z(m_ + i);
      if (zi == upperScaled_(i)) {
        activeRows.push_back(i);
        side.push_back(1);
      } else if (zi == lowerScaled_(i)) {
        activeRows.push_back(i);
        side.push_back(-1);
      }
    }
    Index zeroRows = 0;
    for (std::size_t k : zeroBlocks) zeroRows += program_.blocks[k].rowCount;
    const auto active = static_cast<Index>(activeRows.size());
    if (zeroRows + active == 0) return std::nullopt;

    if (opDense_.size() == 0) opDense_ = kappa_ * program_.constraint.dense();
    const Matrix dDense(d_);
    Matrix e(zeroRows + active, p_);
    Vector f = Vector::Zero(zeroRows + active);
    Index row = 0;
    for (std::size_t k : zeroBlocks) {
      const auto& block = program_.blocks[k];
      e.middleRows(row, block.rowCount) = dDense.middleRows(block.firstRow, block.rowCount);
      row += block.rowCount;
    }
    for (Index a = 0; a < active; ++a) {
      const Index i = activeRows[static_cast<std::size_t>(a)];
      e.row(row + a) = opDense_.row(i);
      f(row + a) = side[static_cast<std::size_t>(a)] > 0 ? upperScaled_(i) : lowerScaled_(i);
    }

    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(e);
    Vector candidate = x + cod.solve(f - e * x);
    const double fScale = 1.0 + infNorm(f);
    if (infNorm(e * candidate - f) > 1e-9 * fScale) return std::nullopt;
    const double boundScale = 1.0 + std::max(infNorm(program_.upper), infNorm(program_.lower));
    if (program_.constraintViolation(candidate) > 1e-9 * boundScale) return std::nullopt;

    // Gradient of the smooth (nonzero) blocks at the candidate.
    Vector grad = Vector::Zero(p_);
    std::vector<bool> isZero(program_.blocks.size(), false);
    for (std::size_t k : zeroBlocks) isZero[k] = true;
    const Vector dx = d_ * candidate;
    for (std::size_t k = 0; k < program_.blocks.size(); ++k) {
      if (isZero[k]) continue;
      const auto& block = program_.blocks[k];
      const auto seg = dx.segment(block.firstRow, block.rowCount);
      const double norm = seg.norm();
      if (norm <= 1e-12 * (1.0 + infNorm(candidate))) return std::nullopt;
      grad += weights_(static_cast<Index>(k)) *
              (dDense.middleRows(block.firstRow, block.rowCount).transpose() * seg) / norm;
    }
    const Matrix et = e.transpose();
    Eigen::CompleteOrthogonalDecomposition<Matrix> codT(et);
    const Vector mult = codT.solve(-grad);
    const double gradScale = 1.0 + infNorm(grad);
    const double stationarity = infNorm(et * mult + grad) / gradScale;
    if (stationarity > tol) return std::nullopt;
    row = 0;
    for (std::size_t k : zeroBlocks) {
      const auto& block = program_.blocks[k];
      const double w = weights_(static_cast<Index>(k));
      if (mult.segment(row, block.rowCount).norm() > w * (1.0 + 1e-6) + tol * gradScale) {
        return std::nullopt;
      }
      row += block.rowCount;
    }
    for (Index a = 0; a < active; ++a) {
      if (side[static_cast<std::size_t>(a)] * mult(row + a) < -tol * gradScale) return std::nullopt;
    }

    Solution out;
    out.primal = candidate;
    for (Index i = 0; i < p_; ++i) {
      if (std::abs(out.primal(i)) <= 1e-14 * (1.0 + infNorm(candidate))) out.primal(i) = 0.0;
    }
    out.objective = program_.objective(out.primal);
    out.status = SolveStatus::kOptimal;
    out.kktResidual = stationarity;
    return out;
  }

  // Projects onto the box when that is exact (variant B), then zeroes entries
  // that are numerically zero provided feasibility survives.
  Vector finalize(const Vector& x, double tol) const {
    Vector out = x;
    const auto& op = program_.constraint;
    const double s = op.scale();
    if (op.isIdentity()) {
      for (Index i = 0; i < p_; ++i) {
        const double image = std::clamp(s * out(i), program_.lower(i), program_.upper(i));
        out(i) = image / s;
      }
    }
    const double scale = std::max(1.0, infNorm(out));
    const double cutoff = 10.0 * tol * scale;
    Vector cleaned = out;
    for (Index i = 0; i < p_; ++i) {
      if (std::abs(cleaned(i)) <= cutoff) cleaned(i) = 0.0;
    }
    if (cleaned == out) return out;
    const double allowed =
        std::max(program_.constraintViolation(out), tol * (1.0 + infNorm(program_.upper)));
    if (program_.constraintViolation(cleaned) <= allowed &&
        program_.objective(cleaned) <= program_.objective(out) + tol * scale) {
      return cleaned;
    }
    return out;
  }

  const ConvexProgram& program_;
  Index p_ = 0;
  Index m_ = 0;
  Eigen::SparseMatrix<double, Eigen::RowMajor> d_;
  SparseCol dt_;
  Vector weights_;
  double kappa_ = 1.0;
  Vector lowerScaled_;
  Vector upperScaled_;
  Eigen::SimplicialLLT<SparseCol> sparse_;
  Eigen::LLT<Matrix> dense_;
  bool useDense_ = false;
  Matrix lowRank_;
  Matrix solvedLowRank_;
  Eigen::LLT<Matrix> capacitance_;
  Matrix opDense_;
  static constexpr Index kMaxPolishDimension = 400;
};

}  // namespace

Solution solve(const ConvexProgram& program, const SolverSettings& settings,
               const Vector* warmStart) {
  settings.validate();
  const Index p = program.originalCount;
  if (program.lower.size() != p || program.upper.size() != p ||
      program.splitting.cols() != p || program.constraint.dimension() != p) {
    throw Error(ErrorCode::kDimensionMismatch, "inconsistent program dimensions");
  }
  if ((program.lower.array() > program.upper.array()).any()) return infeasibleSolution(p);
  // The penalty is nonnegative and vanishes at 0, so a feasible origin is optimal.
  if (program.zeroIsFeasible()) return zeroSolution(p);
  if (program.constraint.scale() == 0.0) return infeasibleSolution(p);

  AdmmWorkspace workspace(program);
  return workspace.run(settings, warmStart);
}

namespace reference {

namespace {

// Dense tableau simplex with Bland's rule: minimize c^T y, A y = b, y >= 0.
class DenseSimplex {
 public:
  DenseSimplex(Matrix a, Vector b, Vector c) : rows_(a.rows()), cols_(a.cols()), cost_(c) {
    for (Index i = 0; i < rows_; ++i) {
      if (b(i) < 0.0) {
        a.row(i) *= -1.0;
        b(i) = -b(i);
      }
    }
    // [A | I_artificial | b]
    tableau_ = Matrix::Zero(rows_, cols_ + rows_ + 1);
    tableau_.leftCols(cols_) = a;
    tableau_.block(0, cols_, rows_, rows_).setIdentity();
    tableau_.col(cols_ + rows_) = b;
    basis_.resize(static_cast<std::size_t>(rows_));
    for (Index i = 0; i < rows_; ++i) basis_[static_cast<std::size_t>(i)] = cols_ + i;
  }

  std::optional<Vector> run() {
    Vector phase1 = Vector::Zero(cols_ + rows_);
    phase1.tail(rows_).setOnes();
    iterate(phase1, cols_ + rows_);
    if (tableau_.col(cols_ + rows_).dot(basisCosts(phase1)) > 1e-9) return std::nullopt;
    // Drive remaining artificial variables out of the basis where possible.
    for (Index i = 0; i < rows_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < cols_) continue;
      for (Index j = 0; j < cols_; ++j) {
        if (std::abs(tableau_(i, j)) > 1e-10) {
          pivot(i, j);
          break;
        }
      }
    }
    Vector phase2 = Vector::Zero(cols_ + rows_);
    phase2.head(cols_) = cost_;
    iterate(phase2, cols_);
    Vector y = Vector::Zero(cols_);
    for (Index i = 0; i < rows_; ++i) {
      const Index j = basis_[static_cast<std::size_t>(i)];
      if (j < cols_) y(j) = tableau_(i, cols_ + rows_);
    }
    return y;
  }

 private:
  Vector basisCosts(const Vector& c) const {
    Vector cb(rows_);
    for (Index i = 0; i < rows_; ++i) cb(i) = c(basis_[static_cast<std::size_t>(i)]);
    return cb;
  }

  void iterate(const Vector& c, Index allowedCols) {
    const Index rhsCol = cols_ + rows_;
    for (int guard = 0; guard < 100000; ++guard) {
      const Vector cb = basisCosts(c);
      Index entering = -1;
      for (Index j = 0; j < allowedCols; ++j) {
        const double reduced = c(j) - cb.dot(tableau_.col(j));
        if (reduced < -1e-11) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return;
      Index leaving = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < rows_; ++i) {
        const double coef = tableau_(i, entering);
        if (coef <= 1e-12) continue;
        const double ratio = tableau_(i, rhsCol) / coef;
        if (ratio < best - 1e-14 ||
            (std::abs(ratio - best) <= 1e-14 && leaving >= 0 &&
             basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leaving)])) {
          best = ratio;
          leaving = i;
        }
      }
      if (leaving < 0) {
        throw Error(ErrorCode::kInvalidArgument, "reference LP is unbounded");
      }
      pivot(leaving, entering);
    }
    throw Error(ErrorCode::kInvalidArgument, "reference simplex did not terminate");
  }

  void pivot(Index r, Index c) {
    tableau_.row(r) /= tableau_(r, c);
    for (Index i = 0; i < rows_; ++i) {
      if (i != r && tableau_(i, c) != 0.0) {
        tableau_.row(i) -= tableau_(i, c) * tableau_.row(r);
      }
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  Index rows_;
  Index cols_;
  Vector cost_;
  Matrix tableau_;
  std::vector<Index> basis_;
};

void requireSmall(const ConvexProgram& program) {
  if (program.variableCount() > kMaxVariables) {
    throw Error(ErrorCode::kTooLarge,
                "reference solver is limited to " + std::to_string(kMaxVariables) +
                    " lifted variables, got " + std::to_string(program.variableCount()));
  }
}

}  // namespace

Solution simplexSolve(const ConvexProgram& program) {
  requireSmall(program);
  if (!program.isLinear()) {
    throw Error(ErrorCode::kInvalidArgument, "simplexSolve needs a linear program");
  }
  const Index p = program.originalCount;
  const Index a = program.absBlockCount();
  const Matrix d = Matrix(program.splitting);
  const Matrix op = program.constraint.dense();

  // Columns: x+ (p), x- (p), s+ (a), s- (a), upper slack (p), lower surplus (p).
  const Index cols = 4 * p + 2 * a;
  const Index rows = a + 2 * p;
  Matrix lp = Matrix::Zero(rows, cols);
  Vector b = Vector::Zero(rows);
  Vector c = Vector::Zero(cols);
  for (Index k = 0; k < a; ++k) {
    const Index row = program.blocks[static_cast<std::size_t>(k)].firstRow;
    lp.block(k, 0, 1, p) = d.row(row);
    lp.block(k, p, 1, p) = -d.row(row);
    lp(k, 2 * p + k) = -1.0;
    lp(k, 2 * p + a + k) = 1.0;
    c(2 * p + k) = program.blocks[static_cast<std::size_t>(k)].weight;
    c(2 * p + a + k) = program.blocks[static_cast<std::size_t>(k)].weight;
  }
  for (Index i = 0; i < p; ++i) {
    lp.block(a + i, 0, 1, p) = op.row(i);
    lp.block(a + i, p, 1, p) = -op.row(i);
    lp(a + i, 2 * p + 2 * a + i) = 1.0;
    b(a + i) = program.upper(i);
    lp.block(a + p + i, 0, 1, p) = op.row(i);
    lp.block(a + p + i, p, 1, p) = -op.row(i);
    lp(a + p + i, 3 * p + 2 * a + i) = -1.0;
    b(a + p + i) = program.lower(i);
  }

  DenseSimplex simplex(lp, b, c);
  const auto y = simplex.run();
  if (!y) return infeasibleSolution(p);
  Solution out;
  out.primal = y->head(p) - y->segment(p, p);
  out.objective = program.objective(out.primal);
  out.status = SolveStatus::kOptimal;
  return out;
}

Solution subgradientSolve(const ConvexProgram& program, long iterations) {
  requireSmall(program);
  const Index p = program.originalCount;
  if ((program.lower.array() > program.upper.array()).any()) return infeasibleSolution(p);
  const Matrix op = program.constraint.dense();
  Eigen::FullPivLU<Matrix> lu(op);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::kInvalidArgument, "subgradient oracle needs an invertible operator");
  }
  const Matrix inv = lu.inverse();
  const Matrix d = Matrix(program.splitting) * inv;  // penalty rows in y coordinates

  auto objective = [&](const Vector& y) {
    const Vector dy = d * y;
    double sum = 0.0;
    for (const auto& block : program.blocks) {
      sum += block.weight * dy.segment(block.firstRow, block.rowCount).norm();
    }
    return sum;
  };
  auto project = [&](Vector& y) { y = y.cwiseMax(program.lower).cwiseMin(program.upper); };

  Vector best = Vector::Zero(p);
  project(best);
  double bestValue = objective(best);
  const int stages = 20;
  const long perStage = std::max<long>(1, iterations / stages);
  double step = std::max(1e-3, (program.upper - program.lower).maxCoeff());
  step = std::max(step, infNorm(best));

  Vector y(p);
  Vector g(p);
  for (int stage = 0; stage < stages; ++stage) {
    y = best;
    for (long t = 0; t < perStage; ++t) {
      const Vector dy = d * y;
      Vector rowGrad = Vector::Zero(dy.size());
      for (const auto& block : program.blocks) {
        const auto seg = dy.segment(block.firstRow, block.rowCount);
        const double norm = seg.norm();
        if (norm > 0.0) {
          rowGrad.segment(block.firstRow, block.rowCount) = block.weight * seg / norm;
        }
      }
      g = d.transpose() * rowGrad;
      const double gNorm = g.norm();
      if (gNorm == 0.0) break;
      y -= (step / std::sqrt(1.0 + static_cast<double>(t))) * g / gNorm;
      project(y);
      const double value = objective(y);
      if (value < bestValue) {
        bestValue = value;
        best = y;
      }
    }
    step *= 0.5;
  }

  Solution out;
  out.primal = inv * best;
  out.objective = program.objective(out.primal);
  out.status = SolveStatus::kOptimal;
  out.iterations = static_cast<int>(std::min<long>(iterations, std::numeric_limits<int>::max()));
  return out;
}

}  // namespace reference

Solution referenceSolve(const ConvexProgram& program) {
  reference::requireSmall(program);
  if ((program.lower.array() > program.upper.array()).any()) {
    return infeasibleSolution(program.originalCount);
  }
  if (program.zeroIsFeasible()) return zeroSolution(program.originalCount);
  return program.isLinear() ? reference::simplexSolve(program)
                            : reference::subgradientSolve(program);
}

}  // namespace netcca
