#include "fem/formula/semantic_tree.h"

#include <algorithm>
#include <set>

namespace fem::formula {
namespace {

void AppendSerialized(const TreeNode& node, bool generalized, std::string& out) {
  if (generalized && node.kind == NodeKind::kVariable) {
    out += kVariableWildcard;
  } else if (generalized && node.kind == NodeKind::kConstant) {
    out += kConstantWildcard;
  } else {
    out += node.label;
  }
  if (node.children.empty()) return;
  out += '(';
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    if (i) out += ',';
    AppendSerialized(node.children[i], generalized, out);
  }
  out += ')';
}

void CollectVariables(const TreeNode& node, std::set<std::string>& out) {
  if (node.kind == NodeKind::kVariable) out.insert(node.label);
  for (const auto& c : node.children) CollectVariables(c, out);
}

void AppendDebug(const TreeNode& node, int level, std::string& out) {
  out.append(static_cast<std::size_t>(2 * (level - 1)), ' ');
  out += node.label;
  out += "  [";
  out += NodeKindName(node.kind);
  out += ", level ";
  out += std::to_string(level);
  out += "]\n";
  for (const auto& c : node.children) AppendDebug(c, level + 1, out);
}

}  // namespace

std::string_view NodeKindName(NodeKind kind) {
  switch (kind) {
    case NodeKind::kOperator: return "operator";
    case NodeKind::kFunction: return "function";
    case NodeKind::kVariable: return "variable";
    case NodeKind::kConstant: return "constant";
    case NodeKind::kGroup: return "group";
  }
  return "?";
}

TreeNode Leaf(NodeKind kind, std::string label) {
  return TreeNode{kind, std::move(label), {}};
}

TreeNode Node(NodeKind kind, std::string label, std::vector<TreeNode> children) {
  return TreeNode{kind, std::move(label), std::move(children)};
}

std::string Serialize(const TreeNode& node) {
  std::string out;
  AppendSerialized(node, false, out);
  return out;
}

std::string SerializeGeneralized(const TreeNode& node) {
  std::string out;
  AppendSerialized(node, true, out);
  return out;
}

TreeNode Generalize(const TreeNode& node) {
  TreeNode out;
  out.kind = node.kind;
  if (node.kind == NodeKind::kVariable) {
    out.label = std::string(kVariableWildcard);
  } else if (node.kind == NodeKind::kConstant) {
    out.label = std::string(kConstantWildcard);
  } else {
    out.label = node.label;
  }
  out.children.reserve(node.children.size());
  for (const auto& c : node.children) out.children.push_back(Generalize(c));
  return out;
}

bool IsWellFormed(const TreeNode& node) {
  if (node.label.empty()) return false;
  if (node.label.find_first_of("(),") != std::string::npos) return false;
  const bool leaf_kind =
      node.kind == NodeKind::kVariable || node.kind == NodeKind::kConstant;
  if (leaf_kind != node.children.empty()) return false;
  return std::all_of(node.children.begin(), node.children.end(),
                     [](const TreeNode& c) { return IsWellFormed(c); });
}

std::size_t NodeCount(const TreeNode& node) {
  std::size_t n = 1;
  for (const auto& c : node.children) n += NodeCount(c);
  return n;
}

std::size_t Depth(const TreeNode& node) {
  std::size_t d = 0;
  for (const auto& c : node.children) d = std::max(d, Depth(c));
  return d + 1;
}

std::size_t CountVariables(const TreeNode& node) {
  std::set<std::string> labels;
  CollectVariables(node, labels);
  return labels.size();
}

std::size_t CountOperators(const TreeNode& node) {
  std::size_t n =
      (node.kind == NodeKind::kOperator || node.kind == NodeKind::kFunction) ? 1 : 0;
  for (const auto& c : node.children) n += CountOperators(c);
  return n;
}

std::string DebugString(const SemanticTree& tree) {
  std::string out;
  AppendDebug(tree.root, 1, out);
  return out;
}

}  // namespace fem::formula
