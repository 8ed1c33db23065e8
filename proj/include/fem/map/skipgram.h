#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fem/kernels/walks.h"

namespace fem::map {

struct SkipGramOptions {
  std::size_t dim = 128;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;  // decays linearly to 1e-4 of itself
  std::uint64_t seed = 42;
};

// Row-major vertex x dim matrix.
struct EmbeddingMatrix {
  std::size_t rows = 0;
  std::size_t dim = 0;
  std::vector<double> values;

  std::span<double> Row(std::size_t r) { return {values.data() + r * dim, dim}; }
  std::span<const double> Row(std::size_t r) const { return {values.data() + r * dim, dim}; }
};

struct SkipGramModel {
  EmbeddingMatrix input;   // vertex embeddings
  EmbeddingMatrix output;  // context vectors
  std::vector<bool> present;             // vertex occurred in some walk
  std::vector<double> epoch_objective;   // mean per-pair objective after each epoch
};

// Objective of one (center, context, negatives) sample:
//   log sigma(context . center) + sum_k log sigma(-negative_k . center)
double SampleObjective(std::span<const double> center, std::span<const double> context,
                       std::span<const std::span<const double>> negatives);

// Gradient of SampleObjective. Output spans must match the input sizes;
// `negative_grads[k]` receives the gradient for `negatives[k]`.
void SampleGradient(std::span<const double> center, std::span<const double> context,
                    std::span<const std::span<const double>> negatives, std::span<double> center_grad,
                    std::span<double> context_grad, std::span<const std::span<double>> negative_grads);

// Skip-gram with negative sampling over vertex sequences, by serial stochastic
// gradient ascent. Noise distribution is proportional to frequency^0.75.
// Deterministic for a fixed seed.
SkipGramModel TrainSkipGram(const std::vector<kernels::Walk>& walks, std::size_t vertex_count,
                            const SkipGramOptions& options);

// max(0, cosine); 0 when either vector is zero.
double RectifiedCosine(std::span<const double> a, std::span<const double> b);

}  // namespace fem::map
