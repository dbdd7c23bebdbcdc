#pragma once

// Standardization, thin SVD and the regularized covariance operators used by
// the sparse CCA fit. Nothing here forms or factorizes a dense p x p matrix:
// every covariance product goes through the thin SVD of the data, so the
// work is O(n^2 (n + p)) when p >> n.

#include <Eigen/Dense>

#include "netcca/error.hpp"

namespace netcca {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Singular values below this fraction of the largest are treated as zero.
inline constexpr double kRankTolerance = 1e-10;

struct DataMatrix {
  Matrix values;
  Vector columnMeans;  // original units
  Vector columnSds;    // original units, 1/(n-1) convention
  bool standardized = false;

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }
};

// Centers and scales every column to mean 0 and sample variance 1. Throws
// kZeroVarianceColumn (with the column index) rather than producing NaNs.
DataMatrix standardize(const Eigen::Ref<const Matrix>& raw);

// Applies the centering/scaling recorded in `reference` to new rows, e.g. a
// held-out fold.
Matrix applyStandardization(const DataMatrix& reference,
                            const Eigen::Ref<const Matrix>& raw);

struct ThinSvd {
  Matrix left;     // n x r
  Vector singular; // r, nonincreasing
  Matrix right;    // p x r

  Index rank() const { return singular.size(); }
  Matrix reconstruct() const;
};

// Rank-truncated thin SVD (singular values <= kRankTolerance * max dropped).
ThinSvd thinSvd(const Eigen::Ref<const Matrix>& x);

// S_xy = X^T Y / (n - 1).
Matrix crossCovariance(const DataMatrix& x, const DataMatrix& y);

// sqrt(log(dim) / n), natural log.
double ridgeConstant(Index dim, Index n);

// S + ridge * I with S = X^T X / (n - 1), held as V diag(lambda) V^T plus the
// constant-ridge orthogonal complement of span(V).
class RegCovOperator {
 public:
  explicit RegCovOperator(const DataMatrix& x);
  RegCovOperator(const ThinSvd& svd, Index sampleCount, double ridge);

  Index dimension() const { return basis_.rows(); }
  Index sampleCount() const { return sampleCount_; }
  double ridge() const { return ridge_; }
  // Orthonormal p x r basis of the column space of S.
  const Matrix& basis() const { return basis_; }
  // Nonzero eigenvalues of S (not including the ridge).
  const Vector& eigenvalues() const { return eigenvalues_; }
  // U D of the source SVD (n x r), used to form cross-covariances.
  const Matrix& scores() const { return scores_; }

  Matrix times(const Eigen::Ref<const Matrix>& m) const;
  Matrix inverseTimes(const Eigen::Ref<const Matrix>& m) const;
  Matrix inverseSqrtTimes(const Eigen::Ref<const Matrix>& m) const;

 private:
  Matrix basis_;
  Vector eigenvalues_;
  Matrix scores_;
  Index sampleCount_ = 0;
  double ridge_ = 0.0;
};

Matrix invRegCovTimes(const RegCovOperator& op, const Eigen::Ref<const Matrix>& m);
Vector invSqrtRegCovTimes(const RegCovOperator& op, const Eigen::Ref<const Vector>& v);

struct NonsparseTriple {
  Vector alpha;  // unit l2 norm
  Vector beta;   // unit l2 norm
  double rho = 0.0;
};

// k-th (1-based) nonsparse canonical pair of the ridge-regularized problem:
// alpha = S~xx^{-1/2} u_k and beta = S~yy^{-1/2} v_k rescaled to unit norm,
// rho = sqrt(lambda_k) where lambda_k is the k-th singular value of
// S~xx^{-1/2} S_xy S~yy^{-1/2}.
NonsparseTriple nonsparseInit(const DataMatrix& x, const DataMatrix& y, Index k);
NonsparseTriple nonsparseInit(const RegCovOperator& opX, const RegCovOperator& opY,
                              Index k);

// Flips (alpha, beta) jointly so the largest-magnitude entry of alpha is
// positive. Ties resolve to the lowest index.
void canonicalizeSign(Vector& alpha, Vector& beta);

// Orthonormal basis for the columns of `basis` (Householder QR). Throws
// kDegenerateBasis when a column is dependent on the earlier ones.
Matrix orthonormalize(const Eigen::Ref<const Matrix>& basis);

// X P_perp, with P_perp the projector onto the orthogonal complement of the
// columns of `basis`. The result is no longer unit-variance, so
// `standardized` is cleared; the original means/sds are kept for reporting.
DataMatrix deflate(const DataMatrix& x, const Eigen::Ref<const Matrix>& basis);

}  // namespace netcca
