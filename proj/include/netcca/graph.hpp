#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "netcca/error.hpp"

namespace netcca {

// Node weight as a function of degree, w_i = f(d_i).
class WeightRule {
 public:
  enum class Kind { kDegree, kUnit, kCustom };

  static WeightRule degree() { return WeightRule(Kind::kDegree, {}); }
  static WeightRule unit() { return WeightRule(Kind::kUnit, {}); }
  // Degrees missing from `table` fall back to the degree rule.
  static WeightRule custom(std::map<std::size_t, double> table);

  Kind kind() const { return kind_; }
  double operator()(std::size_t degree) const;

 private:
  WeightRule(Kind kind, std::map<std::size_t, double> table)
      : kind_(kind), table_(std::move(table)) {}

  Kind kind_;
  std::map<std::size_t, double> table_;
};

using Edge = std::pair<std::size_t, std::size_t>;

// Undirected prior network over p features. Edges are stored with
// first < second, sorted. Degree-0 nodes (singletons) carry weight 1 as a
// sentinel; penalties never use a singleton's weight.
struct FeatureGraph {
  std::size_t nodeCount = 0;
  std::vector<Edge> edges;
  std::vector<std::size_t> degrees;
  std::vector<double> weights;
  std::size_t duplicatesRemoved = 0;

  std::size_t edgeCount() const { return edges.size(); }
  bool isSingleton(std::size_t i) const { return degrees[i] == 0; }
  std::vector<std::size_t> singletons() const;

  // Builds a graph, normalizing pairs to (min, max), sorting and dropping
  // duplicates. Throws kSelfLoop / kInvalidArgument on bad endpoints.
  static FeatureGraph build(std::size_t nodeCount, std::vector<Edge> edges,
                            const WeightRule& rule = WeightRule::degree());
  static FeatureGraph empty(std::size_t nodeCount) { return build(nodeCount, {}); }
};

// Reads one edge per line: two whitespace-separated tokens, each a feature
// name from `featureNames` or a 1-based index. Blank lines and lines starting
// with '#' are skipped. Errors: kUnknownFeature, kSelfLoop, kParseError (the
// 1-based line number is attached as the index).
FeatureGraph loadEdgeList(const std::filesystem::path& path,
                          const std::vector<std::string>& featureNames,
                          const WeightRule& rule = WeightRule::degree());

struct GraphViolation {
  enum class Kind { kDimensionMismatch, kSelfLoop, kDuplicateEdge, kOutOfRange,
                    kDegreeMismatch, kBadWeight };
  Kind kind;
  std::string message;
};

struct GraphReport {
  std::vector<GraphViolation> violations;
  std::size_t duplicatesRemoved = 0;  // informational, not a violation

  bool ok() const { return violations.empty(); }
  bool has(GraphViolation::Kind kind) const;
};

GraphReport validate(const FeatureGraph& g, std::size_t expectedDimension);

}  // namespace netcca
