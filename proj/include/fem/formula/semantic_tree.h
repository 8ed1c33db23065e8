#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace fem::formula {

enum class NodeKind { kOperator, kFunction, kVariable, kConstant, kGroup };

std::string_view NodeKindName(NodeKind kind);

// Wildcard labels used by generalized terms.
inline constexpr std::string_view kVariableWildcard = "*_v";
inline constexpr std::string_view kConstantWildcard = "*_c";

struct TreeNode {
  NodeKind kind = NodeKind::kVariable;
  std::string label;
  std::vector<TreeNode> children;

  bool IsLeaf() const { return children.empty(); }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

TreeNode Leaf(NodeKind kind, std::string label);
TreeNode Node(NodeKind kind, std::string label, std::vector<TreeNode> children);

// Layout tree of one formula. The root sits at level 1.
struct SemanticTree {
  TreeNode root;
  friend bool operator==(const SemanticTree&, const SemanticTree&) = default;
};

// Prefix form `label(child,child,...)`; leaves serialize as their label.
// Injective up to tree structure because labels never contain '(' ',' ')'.
std::string Serialize(const TreeNode& node);

// Same as Serialize on Generalize(node).
std::string SerializeGeneralized(const TreeNode& node);

// Replaces variable labels with `*_v` and constant labels with `*_c`.
// Idempotent.
TreeNode Generalize(const TreeNode& node);

// Checks the structural invariants: variable/constant nodes are leaves,
// operator/function/group nodes have at least one child, labels are
// non-empty and free of serialization delimiters.
bool IsWellFormed(const TreeNode& node);

std::size_t NodeCount(const TreeNode& node);
std::size_t Depth(const TreeNode& node);

// Distinct variable labels in the tree.
std::size_t CountVariables(const TreeNode& node);

// Operator and function nodes, with multiplicity.
std::size_t CountOperators(const TreeNode& node);

// Indented multi-line rendering, one node per line with its level.
std::string DebugString(const SemanticTree& tree);

}  // namespace fem::formula
