#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fem/formula/semantic_tree.h"

namespace fem::formula {

enum class TermKind { kOriginal, kGeneralized };

std::string_view TermKindName(TermKind kind);

struct FormulaTerm {
  std::string serialization;
  TermKind kind = TermKind::kOriginal;
  int level = 1;  // level of the subtree root; the tree root is 1

  friend bool operator==(const FormulaTerm&, const FormulaTerm&) = default;
  friend auto operator<=>(const FormulaTerm&, const FormulaTerm&) = default;
};

// Multiset of terms. Order follows a pre-order walk of the source tree with
// each node's original term immediately before its generalized term.
struct TermSet {
  std::vector<FormulaTerm> terms;
  std::size_t source_node_count = 0;

  bool empty() const { return terms.empty(); }
  std::size_t size() const { return terms.size(); }
};

// Every non-leaf subtree contributes one original and one generalized term at
// its level. A leaf root yields an empty set.
TermSet ExtractTerms(const SemanticTree& tree);

// Sum of levels over all terms, original and generalized.
std::uint64_t Complexity(const TermSet& terms);

struct LayoutWeights {
  double generalized = 0.5;  // weight of a generalized term; originals weigh 1
};

// Layout similarity of `target` seen from `source`, in [0,1].
//
// A source term is matched when the target holds a term of the same kind and
// serialization. The score is coverage (matched / |source|) times the
// kind-weighted mean of 1 / (1 + minimum level gap), where unmatched terms
// contribute 0. Empty source gives 0. Not symmetric.
double LayoutTransition(const TermSet& target, const TermSet& source,
                        const LayoutWeights& weights = {});

}  // namespace fem::formula
