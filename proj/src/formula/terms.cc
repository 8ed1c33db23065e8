#include "fem/formula/terms.h"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <utility>

namespace fem::formula {
namespace {

void Collect(const TreeNode& node, int level, TermSet& out) {
  ++out.source_node_count;
  if (node.IsLeaf()) return;
  out.terms.push_back({Serialize(node), TermKind::kOriginal, level});
  out.terms.push_back({SerializeGeneralized(node), TermKind::kGeneralized, level});
  for (const auto& child : node.children) Collect(child, level + 1, out);
}

using TermKey = std::pair<TermKind, std::string_view>;

}  // namespace

std::string_view TermKindName(TermKind kind) {
  return kind == TermKind::kOriginal ? "original" : "generalized";
}

TermSet ExtractTerms(const SemanticTree& tree) {
  TermSet out;
  Collect(tree.root, 1, out);
  return out;
}

std::uint64_t Complexity(const TermSet& terms) {
  std::uint64_t total = 0;
  for (const auto& t : terms.terms) total += static_cast<std::uint64_t>(t.level);
  return total;
}

double LayoutTransition(const TermSet& target, const TermSet& source,
                        const LayoutWeights& weights) {
  if (source.empty()) return 0.0;

  std::map<TermKey, std::vector<int>> target_levels;
  for (const auto& t : target.terms) {
    target_levels[{t.kind, t.serialization}].push_back(t.level);
  }

  std::size_t matched = 0;
  double weighted = 0.0;
  double weight_total = 0.0;
  for (const auto& t : source.terms) {
    const double w = t.kind == TermKind::kGeneralized ? weights.generalized : 1.0;
    weight_total += w;
    auto it = target_levels.find({t.kind, t.serialization});
    if (it == target_levels.end()) continue;
    ++matched;
    int gap = std::abs(t.level - it->second.front());
    for (int level : it->second) gap = std::min(gap, std::abs(t.level - level));
    weighted += w / (1.0 + gap);
  }
  if (weight_total <= 0.0) return 0.0;
  const double coverage = static_cast<double>(matched) / static_cast<double>(source.size());
  return std::clamp(coverage * weighted / weight_total, 0.0, 1.0);
}

}  // namespace fem::formula
