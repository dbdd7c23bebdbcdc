#include "netcca/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace netcca {

WeightRule WeightRule::custom(std::map<std::size_t, double> table) {
  for (const auto& [degree, weight] : table) {
    if (!(weight > 0.0) || !std::isfinite(weight)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "custom weight for degree " + std::to_string(degree) + " must be positive");
    }
  }
  return WeightRule(Kind::kCustom, std::move(table));
}

double WeightRule::operator()(std::size_t degree) const {
  if (degree == 0) return 1.0;
  switch (kind_) {
    case Kind::kUnit:
      return 1.0;
    case Kind::kCustom:
      if (auto it = table_.find(degree); it != table_.end()) return it->second;
      return static_cast<double>(degree);
    case Kind::kDegree:
    default:
      return static_cast<double>(degree);
  }
}

std::vector<std::size_t> FeatureGraph::singletons() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodeCount; ++i) {
    if (degrees[i] == 0) out.push_back(i);
  }
  return out;
}

FeatureGraph FeatureGraph::build(std::size_t nodeCount, std::vector<Edge> edges,
                                 const WeightRule& rule) {
  FeatureGraph g;
  g.nodeCount = nodeCount;
  for (auto& [a, b] : edges) {
    if (a >= nodeCount || b >= nodeCount) {
      throw Error(ErrorCode::kInvalidArgument,
                  "edge endpoint out of range for " + std::to_string(nodeCount) + " nodes");
    }
    if (a == b) {
      throw Error(ErrorCode::kSelfLoop, "self-loop on node " + std::to_string(a), a);
    }
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  const auto last = std::unique(edges.begin(), edges.end());
  g.duplicatesRemoved = static_cast<std::size_t>(std::distance(last, edges.end()));
  edges.erase(last, edges.end());
  g.edges = std::move(edges);

  g.degrees.assign(nodeCount, 0);
  for (const auto& [a, b] : g.edges) {
    ++g.degrees[a];
    ++g.degrees[b];
  }
  g.weights.resize(nodeCount);
  for (std::size_t i = 0; i < nodeCount; ++i) g.weights[i] = rule(g.degrees[i]);
  return g;
}

namespace {

std::size_t resolveToken(const std::string& token,
                         const std::unordered_map<std::string, std::size_t>& byName,
                         std::size_t p, std::size_t line) {
  if (auto it = byName.find(token); it != byName.end()) return it->second;
  std::size_t index = 0;
  const auto* first = token.data();
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, end, index);
  if (ec == std::errc() && ptr == end) {
    if (index >= 1 && index <= p) return index - 1;
    throw Error(ErrorCode::kUnknownFeature,
                "line " + std::to_string(line) + ": index " + token + " outside 1.." +
                    std::to_string(p),
                line);
  }
  throw Error(ErrorCode::kUnknownFeature,
              "line " + std::to_string(line) + ": unknown feature '" + token + "'", line);
}

}  // namespace

FeatureGraph loadEdgeList(const std::filesystem::path& path,
                          const std::vector<std::string>& featureNames,
                          const WeightRule& rule) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open edge list " + path.string());
  }
  std::unordered_map<std::string, std::size_t> byName;
  for (std::size_t i = 0; i < featureNames.size(); ++i) byName.emplace(featureNames[i], i);
  const std::size_t p = featureNames.size();

  std::vector<Edge> edges;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    const auto start = text.find_first_not_of(" \t");
    if (start == std::string::npos || text[start] == '#') continue;

    std::istringstream fields(text);
    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line) + ": expected two tokens", line);
    }
    const std::size_t i = resolveToken(a, byName, p, line);
    const std::size_t j = resolveToken(b, byName, p, line);
    if (i == j) {
      throw Error(ErrorCode::kSelfLoop,
                  "line " + std::to_string(line) + ": self-loop on '" + a + "'", line);
    }
    edges.emplace_back(i, j);
  }
  return FeatureGraph::build(p, std::move(edges), rule);
}

bool GraphReport::has(GraphViolation::Kind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const GraphViolation& v) { return v.kind == kind; });
}

GraphReport validate(const FeatureGraph& g, std::size_t expectedDimension) {
  using Kind = GraphViolation::Kind;
  GraphReport report;
  report.duplicatesRemoved = g.duplicatesRemoved;
  auto add = [&](Kind kind, std::string message) {
    report.violations.push_back({kind, std::move(message)});
  };

  if (g.nodeCount != expectedDimension) {
    add(Kind::kDimensionMismatch, "graph has " + std::to_string(g.nodeCount) +
                                      " nodes but data has " +
                                      std::to_string(expectedDimension) + " features");
  }
  if (g.degrees.size() != g.nodeCount || g.weights.size() != g.nodeCount) {
    add(Kind::kDimensionMismatch, "degree/weight vectors do not match node count");
    return report;
  }

  std::vector<std::size_t> degrees(g.nodeCount, 0);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    auto [a, b] = g.edges[e];
    if (a >= g.nodeCount || b >= g.nodeCount) {
      add(Kind::kOutOfRange, "edge " + std::to_string(e) + " has an endpoint out of range");
      continue;
    }
    if (a == b) {
      add(Kind::kSelfLoop, "edge " + std::to_string(e) + " is a self-loop");
      continue;
    }
    ++degrees[a];
    ++degrees[b];
  }
  std::vector<Edge> sorted;
  sorted.reserve(g.edges.size());
  for (auto [a, b] : g.edges) sorted.emplace_back(std::min(a, b), std::max(a, b));
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t e = 1; e < sorted.size(); ++e) {
    if (sorted[e] == sorted[e - 1]) {
      add(Kind::kDuplicateEdge, "duplicate edge (" + std::to_string(sorted[e].first) + ", " +
                                    std::to_string(sorted[e].second) + ")");
    }
  }
  for (std::size_t i = 0; i < g.nodeCount; ++i) {
    if (degrees[i] != g.degrees[i]) {
      add(Kind::kDegreeMismatch, "node " + std::to_string(i) + " degree " +
                                     std::to_string(g.degrees[i]) + " but " +
                                     std::to_string(degrees[i]) + " incident edges");
    }
    if (g.degrees[i] > 0 && !(g.weights[i] > 0.0 && std::isfinite(g.weights[i]))) {
      add(Kind::kBadWeight, "node " + std::to_string(i) + " has non-positive weight");
    }
  }
  return report;
}

}  // namespace netcca
