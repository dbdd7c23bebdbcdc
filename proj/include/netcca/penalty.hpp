#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include <Eigen/SparseCore>

#include "netcca/graph.hpp"
#include "netcca/linalg.hpp"

namespace netcca {

enum class PenaltyFamily { kGrouped, kFused };
enum class ConstraintVariant { kA, kB };

std::string_view to_string(PenaltyFamily family);
std::string_view to_string(ConstraintVariant variant);
PenaltyFamily parsePenaltyFamily(std::string_view text);
ConstraintVariant parseConstraintVariant(std::string_view text);

struct PenaltyConfig {
  PenaltyFamily family = PenaltyFamily::kFused;
  ConstraintVariant constraint = ConstraintVariant::kB;
  double eta = 0.5;    // singleton (l1) share, 0 <= eta < 1
  double gamma = 2.0;  // grouped only, > 1

  void validate() const;
};

// (1-eta) sum_{i~j} (|v_i|^g / w_i + |v_j|^g / w_j)^(1/g) + eta sum_{d_i=0} |v_i|
double groupedPenaltyValue(const Eigen::Ref<const Vector>& v, const FeatureGraph& g,
                           double eta, double gamma);
// (1-eta) sum_{i~j} |v_i / w_i - v_j / w_j| + eta sum_{d_i=0} |v_i|
double fusedPenaltyValue(const Eigen::Ref<const Vector>& v, const FeatureGraph& g, double eta);
double penaltyValue(const PenaltyConfig& cfg, const Eigen::Ref<const Vector>& v,
                    const FeatureGraph& g);

// The linear map inside the l_inf constraint: scale * I (variant B) or
// scale * (S + ridge I) (variant A).
class ConstraintOperator {
 public:
  static ConstraintOperator scaledIdentity(Index dimension, double scale);
  static ConstraintOperator scaledCovariance(std::shared_ptr<const RegCovOperator> covariance,
                                             double scale);

  Index dimension() const { return dimension_; }
  double scale() const { return scale_; }
  bool isIdentity() const { return covariance_ == nullptr; }
  const RegCovOperator* covariance() const { return covariance_.get(); }

  Vector apply(const Eigen::Ref<const Vector>& x) const;
  Vector applyTranspose(const Eigen::Ref<const Vector>& y) const { return apply(y); }
  // Dense form; only for small test-sized problems.
  Matrix dense() const;

 private:
  Index dimension_ = 0;
  double scale_ = 1.0;
  std::shared_ptr<const RegCovOperator> covariance_;
};

// The l_inf constraint || rhs - op(v) ||_inf <= tau of one subproblem.
struct ConstraintData {
  Vector rhs;
  ConstraintOperator op;
  double tau = 0.0;
};

// One penalty term weight * || D_k v ||_2 over the rows
// [firstRow, firstRow + rowCount) of the splitting matrix. One-row blocks are
// absolute values (split into positive parts in the LP form); two-row blocks
// are second-order cones t_k >= || D_k v ||.
struct PenaltyBlock {
  Index firstRow = 0;
  Index rowCount = 1;
  double weight = 0.0;
};

// Cone membership t >= || (v_first * scaleFirst, v_second * scaleSecond) ||.
struct ConeBlock {
  Index output;  // index of t in the lifted variable vector
  Index first;
  Index second;
  double scaleFirst;
  double scaleSecond;
};

// Canonical subproblem
//   minimize   sum_k weight_k || D_k v ||_2
//   subject to lower <= op(v) <= upper
// Lifted variables are [v; s+; s-; t] with the equality block s+ - s- = D v
// for absolute-value rows and the cone blocks t_k >= || D_k v || for grouped
// edges; the objective is linear in the lifted variables.
struct ConvexProgram {
  Index originalCount = 0;
  Eigen::SparseMatrix<double, Eigen::RowMajor> splitting;  // D
  std::vector<PenaltyBlock> blocks;
  ConstraintOperator constraint;
  Vector lower;
  Vector upper;

  Index absBlockCount() const;
  Index coneBlockCount() const;
  bool isLinear() const { return coneBlockCount() == 0; }
  Index variableCount() const;

  // Objective in the original variables.
  double objective(const Eigen::Ref<const Vector>& v) const;
  // max_i distance of op(v)_i outside [lower_i, upper_i].
  double constraintViolation(const Eigen::Ref<const Vector>& v) const;
  bool zeroIsFeasible() const;

  // Lifted-form views.
  Vector linearObjective() const;
  Vector lift(const Eigen::Ref<const Vector>& v) const;
  std::vector<ConeBlock> coneBlocks() const;
};

// Builds the program for one alpha- or beta-subproblem. Only gamma = 2 is
// compilable for the grouped family.
ConvexProgram compileSubproblem(const PenaltyConfig& cfg, const FeatureGraph& g,
                                const ConstraintData& cd);

}  // namespace netcca
