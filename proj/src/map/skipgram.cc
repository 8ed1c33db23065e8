#include "fem/map/skipgram.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "fem/common/errors.h"
#include "fem/common/hash.h"

namespace fem::map {
namespace {

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(sigmoid(x)) without overflow.
double LogSigmoid(double x) { return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

class NoiseSampler {
 public:
  NoiseSampler(const std::vector<std::uint64_t>& frequency) {
    double acc = 0.0;
    cumulative_.reserve(frequency.size());
    for (std::uint64_t f : frequency) {
      acc += std::pow(static_cast<double>(f), 0.75);
      cumulative_.push_back(acc);
    }
  }

  std::size_t Sample(std::mt19937_64& rng) const {
    const double target = kernels::UnitDouble(rng()) * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                                 cumulative_.size() - 1);
  }

 private:
  std::vector<double> cumulative_;
};

// Calls fn(center, context) for every ordered pair within the window.
template <typename Fn>
void ForEachPair(const std::vector<kernels::Walk>& walks, std::size_t window, Fn&& fn) {
  for (const auto& walk : walks) {
    for (std::size_t i = 0; i < walk.size(); ++i) {
      const std::size_t lo = i >= window ? i - window : 0;
      const std::size_t hi = std::min(walk.size(), i + window + 1);
      for (std::size_t j = lo; j < hi; ++j) {
        if (j != i) fn(walk[i], walk[j]);
      }
    }
  }
}

}  // namespace

double SampleObjective(std::span<const double> center, std::span<const double> context,
                       std::span<const std::span<const double>> negatives) {
  double value = LogSigmoid(Dot(context, center));
  for (const auto& neg : negatives) value += LogSigmoid(-Dot(neg, center));
  return value;
}

void SampleGradient(std::span<const double> center, std::span<const double> context,
                    std::span<const std::span<const double>> negatives, std::span<double> center_grad,
                    std::span<double> context_grad, std::span<const std::span<double>> negative_grads) {
  const std::size_t d = center.size();
  const double g_pos = 1.0 - Sigmoid(Dot(context, center));
  for (std::size_t i = 0; i < d; ++i) {
    center_grad[i] = g_pos * context[i];
    context_grad[i] = g_pos * center[i];
  }
  for (std::size_t k = 0; k < negatives.size(); ++k) {
    const double g_neg = -Sigmoid(Dot(negatives[k], center));
    for (std::size_t i = 0; i < d; ++i) {
      center_grad[i] += g_neg * negatives[k][i];
      negative_grads[k][i] = g_neg * center[i];
    }
  }
}

SkipGramModel TrainSkipGram(const std::vector<kernels::Walk>& walks, std::size_t vertex_count,
                            const SkipGramOptions& options) {
  if (walks.empty()) throw Error("skip-gram training needs at least one walk");
  if (options.dim == 0) throw Error("embedding dimension must be positive");
  const std::size_t d = options.dim;

  std::vector<std::uint64_t> frequency(vertex_count, 0);
  for (const auto& walk : walks) {
    for (auto v : walk) {
      if (v >= vertex_count) throw Error("walk references a vertex outside the graph");
      ++frequency[v];
    }
  }

  SkipGramModel model;
  model.input = {vertex_count, d, std::vector<double>(vertex_count * d)};
  model.output = {vertex_count, d, std::vector<double>(vertex_count * d, 0.0)};
  model.present.resize(vertex_count);
  std::mt19937_64 rng(SplitMix64(options.seed));
  for (std::size_t v = 0; v < vertex_count; ++v) {
    model.present[v] = frequency[v] > 0;
    for (double& x : model.input.Row(v)) x = (kernels::UnitDouble(rng()) - 0.5) / static_cast<double>(d);
  }

  const NoiseSampler noise(frequency);
  std::size_t pairs_per_epoch = 0;
  ForEachPair(walks, options.window, [&](auto, auto) { ++pairs_per_epoch; });
  if (pairs_per_epoch == 0) return model;
  const double total_steps = static_cast<double>(pairs_per_epoch * options.epochs);

  std::vector<double> center_grad(d), context_grad(d);
  std::vector<std::vector<double>> neg_grad_store(options.negatives, std::vector<double>(d));
  std::vector<std::size_t> neg_ids;
  std::vector<std::span<const double>> negs;
  std::vector<std::span<double>> neg_grads;

  // Draws negatives distinct from the context vertex.
  auto draw = [&](std::mt19937_64& gen, std::size_t context) {
    neg_ids.clear();
    for (std::size_t k = 0; k < options.negatives; ++k) {
      const std::size_t n = noise.Sample(gen);
      if (n != context) neg_ids.push_back(n);
    }
  };

  auto evaluate = [&]() {
    std::mt19937_64 eval_rng(SplitMix64(options.seed ^ 0x5eedf00dULL));
    double sum = 0.0;
    ForEachPair(walks, options.window, [&](std::size_t center, std::size_t context) {
      draw(eval_rng, context);
      negs.clear();
      for (auto n : neg_ids) negs.push_back(model.output.Row(n));
      sum += SampleObjective(model.input.Row(center), model.output.Row(context), negs);
    });
    return sum / static_cast<double>(pairs_per_epoch);
  };

  double step = 0.0;
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    ForEachPair(walks, options.window, [&](std::size_t center, std::size_t context) {
      const double lr = options.learning_rate * std::max(1e-4, 1.0 - step / total_steps);
      step += 1.0;
      draw(rng, context);
      negs.clear();
      neg_grads.clear();
      for (std::size_t k = 0; k < neg_ids.size(); ++k) {
        negs.push_back(model.output.Row(neg_ids[k]));
        neg_grads.push_back(neg_grad_store[k]);
      }
      SampleGradient(model.input.Row(center), model.output.Row(context), negs, center_grad,
                     context_grad, neg_grads);
      auto apply = [lr](std::span<double> row, const std::vector<double>& g) {
        for (std::size_t i = 0; i < row.size(); ++i) row[i] += lr * g[i];
      };
      apply(model.input.Row(center), center_grad);
      apply(model.output.Row(context), context_grad);
      for (std::size_t k = 0; k < neg_ids.size(); ++k) apply(model.output.Row(neg_ids[k]), neg_grad_store[k]);
    });
    model.epoch_objective.push_back(evaluate());
  }
  return model;
}

double RectifiedCosine(std::span<const double> a, std::span<const double> b) {
  const double na = std::sqrt(Dot(a, a));
  const double nb = std::sqrt(Dot(b, b));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(Dot(a, b) / (na * nb), 0.0, 1.0);
}

}  // namespace fem::map
