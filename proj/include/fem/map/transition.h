#pragma once

#include <span>
#include <string>
#include <vector>

#include "fem/graph/digraph.h"
#include "fem/text/language_model.h"

namespace fem::map {

struct TransitionTriple {
  double context = 0.0;     // Pt
  double layout = 0.0;      // Pl
  double generality = 0.0;  // Pg
};

struct TransitionWeights {
  double context = 1.0;
  double layout = 1.0;
  double generality = 1.0;
};

// tanh of the weighted component sum; in [0,1) for non-negative inputs.
double FuseTransition(const TransitionTriple& triple, const TransitionWeights& weights);

// Context transition from `previous` to each of `candidates`: posterior of
// the previous context given each candidate's context (uniform prior,
// Dirichlet-smoothed query likelihood), normalized over the candidates.
std::vector<double> ContextTransition(const text::Collection& contexts, std::size_t previous,
                                      std::span<const graph::VertexId> candidates);

// Generality transition: the generality of the previous formula.
inline double GeneralityTransition(double previous_generality) { return previous_generality; }

// Rescales each vertex's out-weights to sum to 1. Rows with zero total stay
// zero.
graph::Digraph RowNormalize(const graph::Digraph& g);

}  // namespace fem::map
