#include "netcca/penalty.hpp"

#include <cmath>
#include <string>

namespace netcca {

std::string_view to_string(PenaltyFamily family) {
  return family == PenaltyFamily::kGrouped ? "grouped" : "fused";
}

std::string_view to_string(ConstraintVariant variant) {
  return variant == ConstraintVariant::kA ? "A" : "B";
}

PenaltyFamily parsePenaltyFamily(std::string_view text) {
  if (text == "grouped") return PenaltyFamily::kGrouped;
  if (text == "fused") return PenaltyFamily::kFused;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown penalty '" + std::string(text) + "' (expected grouped|fused)");
}

ConstraintVariant parseConstraintVariant(std::string_view text) {
  if (text == "A" || text == "a") return ConstraintVariant::kA;
  if (text == "B" || text == "b") return ConstraintVariant::kB;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown constraint '" + std::string(text) + "' (expected A|B)");
}

void PenaltyConfig::validate() const {
  if (!(eta >= 0.0 && eta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "eta must lie in [0, 1)");
  }
  if (!(gamma > 1.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::kInvalidArgument, "gamma must be > 1");
  }
}

namespace {

void requireGraphSize(const Eigen::Ref<const Vector>& v, const FeatureGraph& g) {
  if (static_cast<std::size_t>(v.size()) != g.nodeCount) {
    throw Error(ErrorCode::kDimensionMismatch,
                "vector length " + std::to_string(v.size()) + " vs graph with " +
                    std::to_string(g.nodeCount) + " nodes");
  }
}

double singletonMass(const Eigen::Ref<const Vector>& v, const FeatureGraph& g) {
  double sum = 0.0;
  for (std::size_t i = 0; i < g.nodeCount; ++i) {
    if (g.degrees[i] == 0) sum += std::abs(v(static_cast<Index>(i)));
  }
  return sum;
}

}  // namespace

double groupedPenaltyValue(const Eigen::Ref<const Vector>& v, const FeatureGraph& g,
                           double eta, double gamma) {
  requireGraphSize(v, g);
  double edgeSum = 0.0;
  for (const auto& [i, j] : g.edges) {
    const double a = std::pow(std::abs(v(static_cast<Index>(i))), gamma) / g.weights[i];
    const double b = std::pow(std::abs(v(static_cast<Index>(j))), gamma) / g.weights[j];
    edgeSum += std::pow(a + b, 1.0 / gamma);
  }
  return (1.0 - eta) * edgeSum + eta * singletonMass(v, g);
}

double fusedPenaltyValue(const Eigen::Ref<const Vector>& v, const FeatureGraph& g, double eta) {
  requireGraphSize(v, g);
  double edgeSum = 0.0;
  for (const auto& [i, j] : g.edges) {
    edgeSum += std::abs(v(static_cast<Index>(i)) / g.weights[i] -
                        v(static_cast<Index>(j)) / g.weights[j]);
  }
  return (1.0 - eta) * edgeSum + eta * singletonMass(v, g);
}

double penaltyValue(const PenaltyConfig& cfg, const Eigen::Ref<const Vector>& v,
                    const FeatureGraph& g) {
  return cfg.family == PenaltyFamily::kGrouped
             ? groupedPenaltyValue(v, g, cfg.eta, cfg.gamma)
             : fusedPenaltyValue(v, g, cfg.eta);
}

ConstraintOperator ConstraintOperator::scaledIdentity(Index dimension, double scale) {
  ConstraintOperator op;
  op.dimension_ = dimension;
  op.scale_ = scale;
  return op;
}

ConstraintOperator ConstraintOperator::scaledCovariance(
    std::shared_ptr<const RegCovOperator> covariance, double scale) {
  if (!covariance) {
    throw Error(ErrorCode::kInvalidArgument, "scaledCovariance needs a covariance operator");
  }
  ConstraintOperator op;
  op.dimension_ = covariance->dimension();
  op.scale_ = scale;
  op.covariance_ = std::move(covariance);
  return op;
}

Vector ConstraintOperator::apply(const Eigen::Ref<const Vector>& x) const {
  if (covariance_) return scale_ * covariance_->times(x);
  return scale_ * x;
}

Matrix ConstraintOperator::dense() const {
  if (covariance_) {
    return scale_ * covariance_->times(Matrix::Identity(dimension_, dimension_));
  }
  return scale_ * Matrix::Identity(dimension_, dimension_);
}

Index ConvexProgram::absBlockCount() const {
  Index count = 0;
  for (const auto& b : blocks) count += b.rowCount == 1 ? 1 : 0;
  return count;
}

Index ConvexProgram::coneBlockCount() const {
  return static_cast<Index>(blocks.size()) - absBlockCount();
}

Index ConvexProgram::variableCount() const {
  return originalCount + 2 * absBlockCount() + coneBlockCount();
}

double ConvexProgram::objective(const Eigen::Ref<const Vector>& v) const {
  const Vector dv = splitting * v;
  double sum = 0.0;
  for (const auto& b : blocks) {
    sum += b.weight * dv.segment(b.firstRow, b.rowCount).norm();
  }
  return sum;
}

double ConvexProgram::constraintViolation(const Eigen::Ref<const Vector>& v) const {
  const Vector image = constraint.apply(v);
  const Vector below = (lower - image).cwiseMax(0.0);
  const Vector above = (image - upper).cwiseMax(0.0);
  return std::max(below.size() ? below.maxCoeff() : 0.0, above.size() ? above.maxCoeff() : 0.0);
}

bool ConvexProgram::zeroIsFeasible() const {
  return (lower.array() <= 0.0).all() && (upper.array() >= 0.0).all();
}

Vector ConvexProgram::linearObjective() const {
  const Index a = absBlockCount();
  Vector c = Vector::Zero(variableCount());
  Index absIndex = 0;
  Index coneIndex = 0;
  for (const auto& b : blocks) {
    if (b.rowCount == 1) {
      c(originalCount + absIndex) = b.weight;
      c(originalCount + a + absIndex) = b.weight;
      ++absIndex;
    } else {
      c(originalCount + 2 * a + coneIndex) = b.weight;
      ++coneIndex;
    }
  }
  return c;
}

Vector ConvexProgram::lift(const Eigen::Ref<const Vector>& v) const {
  const Index a = absBlockCount();
  const Vector dv = splitting * v;
  Vector out = Vector::Zero(variableCount());
  out.head(originalCount) = v;
  Index absIndex = 0;
  Index coneIndex = 0;
  for (const auto& b : blocks) {
    if (b.rowCount == 1) {
      const double s = dv(b.firstRow);
      out(originalCount + absIndex) = std::max(s, 0.0);
      out(originalCount + a + absIndex) = std::max(-s, 0.0);
      ++absIndex;
    } else {
      out(originalCount + 2 * a + coneIndex) = dv.segment(b.firstRow, b.rowCount).norm();
      ++coneIndex;
    }
  }
  return out;
}

std::vector<ConeBlock> ConvexProgram::coneBlocks() const {
  std::vector<ConeBlock> out;
  const Index base = originalCount + 2 * absBlockCount();
  for (const auto& b : blocks) {
    if (b.rowCount != 2) continue;
    ConeBlock cone{base + static_cast<Index>(out.size()), 0, 0, 0.0, 0.0};
    for (int r = 0; r < 2; ++r) {
      for (decltype(splitting)::InnerIterator it(splitting, b.firstRow + r); it; ++it) {
        (r == 0 ? cone.first : cone.second) = it.col();
        (r == 0 ? cone.scaleFirst : cone.scaleSecond) = it.value();
      }
    }
    out.push_back(cone);
  }
  return out;
}

ConvexProgram compileSubproblem(const PenaltyConfig& cfg, const FeatureGraph& g,
                                const ConstraintData& cd) {
  cfg.validate();
  const Index p = static_cast<Index>(g.nodeCount);
  if (cd.rhs.size() != p || cd.op.dimension() != p) {
    throw Error(ErrorCode::kDimensionMismatch, "constraint data does not match graph size");
  }
  if (!(cd.tau >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tau must be nonnegative");
  }
  if (cfg.family == PenaltyFamily::kGrouped && cfg.gamma != 2.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "grouped penalty can only be compiled with gamma = 2");
  }

  ConvexProgram program;
  program.originalCount = p;
  program.constraint = cd.op;
  program.lower = cd.rhs.array() - cd.tau;
  program.upper = cd.rhs.array() + cd.tau;

  std::vector<Eigen::Triplet<double>> entries;
  Index row = 0;
  const double edgeWeight = 1.0 - cfg.eta;
  if (edgeWeight > 0.0) {
    for (const auto& [ui, uj] : g.edges) {
      const auto i = static_cast<Index>(ui);
      const auto j = static_cast<Index>(uj);
      if (cfg.family == PenaltyFamily::kFused) {
        entries.emplace_back(row, i, 1.0 / g.weights[ui]);
        entries.emplace_back(row, j, -1.0 / g.weights[uj]);
        program.blocks.push_back({row, 1, edgeWeight});
        row += 1;
      } else {
        entries.emplace_back(row, i, 1.0 / std::sqrt(g.weights[ui]));
        entries.emplace_back(row + 1, j, 1.0 / std::sqrt(g.weights[uj]));
        program.blocks.push_back({row, 2, edgeWeight});
        row += 2;
      }
    }
  }
  if (cfg.eta > 0.0) {
    for (Index i = 0; i < p; ++i) {
      if (g.degrees[static_cast<std::size_t>(i)] != 0) continue;
      entries.emplace_back(row, i, 1.0);
      program.blocks.push_back({row, 1, cfg.eta});
      row += 1;
    }
  }
  program.splitting.resize(row, p);
  program.splitting.setFromTriplets(entries.begin(), entries.end());
  return program;
}

}  // namespace netcca
