#include "netcca/linalg.hpp"

#include <cmath>
#include <string>

#include <Eigen/SVD>

namespace netcca {

namespace {

void requireFinite(const Eigen::Ref<const Matrix>& m) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "matrix contains non-finite entries");
  }
}

}  // namespace

DataMatrix standardize(const Eigen::Ref<const Matrix>& raw) {
  const Index n = raw.rows();
  const Index p = raw.cols();
  if (n < 2) {
    throw Error(ErrorCode::kInvalidArgument, "standardize needs at least 2 rows");
  }
  if (p < 1) {
    throw Error(ErrorCode::kInvalidArgument, "standardize needs at least 1 column");
  }
  requireFinite(raw);

  DataMatrix out;
  out.columnMeans = raw.colwise().mean().transpose();
  out.values = raw.rowwise() - out.columnMeans.transpose();
  out.columnSds.resize(p);
  for (Index j = 0; j < p; ++j) {
    const double var = out.values.col(j).squaredNorm() / static_cast<double>(n - 1);
    const double sd = std::sqrt(var);
    // Relative test so columns that are constant up to rounding are caught.
    if (!(sd > 1e-12 * std::max(1.0, std::abs(out.columnMeans(j))))) {
      throw Error(ErrorCode::kZeroVarianceColumn,
                  "column " + std::to_string(j) + " has zero variance", j);
    }
    out.columnSds(j) = sd;
    out.values.col(j) /= sd;
  }
  out.standardized = true;
  return out;
}

Matrix applyStandardization(const DataMatrix& reference,
                            const Eigen::Ref<const Matrix>& raw) {
  if (raw.cols() != reference.columnMeans.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "column count mismatch: " + std::to_string(raw.cols()) + " vs " +
                    std::to_string(reference.columnMeans.size()));
  }
  Matrix out = raw.rowwise() - reference.columnMeans.transpose();
  out.array().rowwise() /= reference.columnSds.transpose().array();
  return out;
}

Matrix ThinSvd::reconstruct() const {
  return left * singular.asDiagonal() * right.transpose();
}

ThinSvd thinSvd(const Eigen::Ref<const Matrix>& x) {
  requireFinite(x);
  Eigen::BDCSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  Index rank = 0;
  if (s.size() > 0 && s(0) > 0.0) {
    const double cutoff = kRankTolerance * s(0);
    while (rank < s.size() && s(rank) > cutoff) ++rank;
  }
  ThinSvd out;
  out.left = svd.matrixU().leftCols(rank);
  out.singular = s.head(rank);
  out.right = svd.matrixV().leftCols(rank);
  return out;
}

Matrix crossCovariance(const DataMatrix& x, const DataMatrix& y) {
  if (x.rows() != y.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "row count mismatch: " + std::to_string(x.rows()) + " vs " +
                    std::to_string(y.rows()));
  }
  return x.values.transpose() * y.values / static_cast<double>(x.rows() - 1);
}

double ridgeConstant(Index dim, Index n) {
  if (dim < 1 || n < 1) {
    throw Error(ErrorCode::kInvalidArgument, "ridgeConstant needs dim >= 1 and n >= 1");
  }
  return std::sqrt(std::log(static_cast<double>(dim)) / static_cast<double>(n));
}

RegCovOperator::RegCovOperator(const DataMatrix& x)
    : RegCovOperator(thinSvd(x.values), x.rows(), ridgeConstant(x.cols(), x.rows())) {}

RegCovOperator::RegCovOperator(const ThinSvd& svd, Index sampleCount, double ridge)
    : basis_(svd.right),
      eigenvalues_(svd.singular.array().square() / static_cast<double>(sampleCount - 1)),
      scores_(svd.left * svd.singular.asDiagonal()),
      sampleCount_(sampleCount),
      ridge_(ridge) {
  if (sampleCount < 2) {
    throw Error(ErrorCode::kInvalidArgument, "covariance needs at least 2 samples");
  }
  if (ridge_ < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "ridge must be nonnegative");
  }
  // Without a ridge the operator is only invertible on a full-rank basis.
  if (ridge_ == 0.0 && basis_.cols() < basis_.rows()) {
    throw Error(ErrorCode::kRankDeficient,
                "covariance is singular and the ridge is zero");
  }
}

Matrix RegCovOperator::times(const Eigen::Ref<const Matrix>& m) const {
  const Matrix coeff = basis_.transpose() * m;
  return basis_ * (eigenvalues_.asDiagonal() * coeff) + ridge_ * m;
}

Matrix RegCovOperator::inverseTimes(const Eigen::Ref<const Matrix>& m) const {
  const Matrix coeff = basis_.transpose() * m;
  const Vector inRange = (eigenvalues_.array() + ridge_).inverse();
  Matrix out = basis_ * (inRange.asDiagonal() * coeff);
  if (ridge_ > 0.0) {
    out += (m - basis_ * coeff) / ridge_;
  }
  return out;
}

Matrix RegCovOperator::inverseSqrtTimes(const Eigen::Ref<const Matrix>& m) const {
  const Matrix coeff = basis_.transpose() * m;
  const Vector inRange = (eigenvalues_.array() + ridge_).rsqrt();
  Matrix out = basis_ * (inRange.asDiagonal() * coeff);
  if (ridge_ > 0.0) {
    out += (m - basis_ * coeff) / std::sqrt(ridge_);
  }
  return out;
}

Matrix invRegCovTimes(const RegCovOperator& op, const Eigen::Ref<const Matrix>& m) {
  if (m.rows() != op.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, "invRegCovTimes: dimension mismatch");
  }
  return op.inverseTimes(m);
}

Vector invSqrtRegCovTimes(const RegCovOperator& op, const Eigen::Ref<const Vector>& v) {
  if (v.size() != op.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, "invSqrtRegCovTimes: dimension mismatch");
  }
  return op.inverseSqrtTimes(v);
}

void canonicalizeSign(Vector& alpha, Vector& beta) {
  if (alpha.size() == 0) return;
  Index arg = 0;
  alpha.cwiseAbs().maxCoeff(&arg);
  if (alpha(arg) < 0.0) {
    alpha = -alpha;
    beta = -beta;
  }
}

NonsparseTriple nonsparseInit(const DataMatrix& x, const DataMatrix& y, Index k) {
  if (x.rows() != y.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "row count mismatch: " + std::to_string(x.rows()) + " vs " +
                    std::to_string(y.rows()));
  }
  return nonsparseInit(RegCovOperator(x), RegCovOperator(y), k);
}

NonsparseTriple nonsparseInit(const RegCovOperator& opX, const RegCovOperator& opY,
                              Index k) {
  const Index n = opX.sampleCount();
  if (opY.sampleCount() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "row count mismatch: " + std::to_string(n) + " vs " +
                    std::to_string(opY.sampleCount()));
  }
  const Index p = opX.dimension();
  const Index q = opY.dimension();
  if (k < 1 || k > std::min({n - 1, p, q})) {
    throw Error(ErrorCode::kInvalidArgument,
                "component index " + std::to_string(k) + " outside 1..min(n-1,p,q)");
  }

  // S~^{-1/2} S_xy S~^{-1/2} = V_x C V_y^T, where C only involves the n x r
  // score blocks. Its singular vectors map back through the bases.
  const Vector gx = (opX.eigenvalues().array() + opX.ridge()).rsqrt();
  const Vector gy = (opY.eigenvalues().array() + opY.ridge()).rsqrt();
  const Matrix core = gx.asDiagonal() * (opX.scores().transpose() * opY.scores()) *
                      gy.asDiagonal() / static_cast<double>(n - 1);

  Eigen::JacobiSVD<Matrix> svd(core, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  const double top = s.size() > 0 ? s(0) : 0.0;
  Index rank = 0;
  if (top > 0.0) {
    while (rank < s.size() && s(rank) > kRankTolerance * top) ++rank;
  }
  // A zero cross-covariance has rank 0; the first component then reports
  // rho = 0 instead of failing.
  if (k > std::max<Index>(rank, 1) || k > core.rows() || k > core.cols()) {
    throw Error(ErrorCode::kRankDeficient,
                "component " + std::to_string(k) + " exceeds rank " +
                    std::to_string(rank) + " of the canonical matrix");
  }

  NonsparseTriple out;
  out.alpha = opX.basis() * (gx.asDiagonal() * svd.matrixU().col(k - 1));
  out.beta = opY.basis() * (gy.asDiagonal() * svd.matrixV().col(k - 1));
  out.alpha.normalize();
  out.beta.normalize();
  out.rho = k <= rank ? std::sqrt(s(k - 1)) : 0.0;
  canonicalizeSign(out.alpha, out.beta);
  return out;
}

Matrix orthonormalize(const Eigen::Ref<const Matrix>& basis) {
  const Index m = basis.cols();
  if (m == 0) return Matrix(basis.rows(), 0);
  Matrix scaled = basis;
  for (Index j = 0; j < m; ++j) {
    const double norm = scaled.col(j).norm();
    if (!(norm > 0.0)) {
      throw Error(ErrorCode::kDegenerateBasis,
                  "basis column " + std::to_string(j) + " is zero", j);
    }
    scaled.col(j) /= norm;
  }
  Eigen::HouseholderQR<Matrix> qr(scaled);
  const Matrix& r = qr.matrixQR();
  for (Index j = 0; j < m; ++j) {
    if (j >= r.rows() || std::abs(r(j, j)) < 1e-10) {
      throw Error(ErrorCode::kDegenerateBasis,
                  "basis column " + std::to_string(j) + " is linearly dependent", j);
    }
  }
  return qr.householderQ() * Matrix::Identity(basis.rows(), m);
}

DataMatrix deflate(const DataMatrix& x, const Eigen::Ref<const Matrix>& basis) {
  if (basis.rows() != x.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "deflate: basis rows must equal p");
  }
  DataMatrix out = x;
  if (basis.cols() == 0) return out;
  const Matrix q = orthonormalize(basis);
  out.values -= (x.values * q) * q.transpose();
  out.standardized = false;
  return out;
}

}  // namespace netcca
