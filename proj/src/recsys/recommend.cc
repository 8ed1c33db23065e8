#include "fem/recsys/recommend.h"

#include <algorithm>
#include <numeric>

#include "fem/common/errors.h"
#include "fem/kernels/joint_features.h"

namespace fem::recsys {

using projection::kFeatureCount;

std::vector<double> FuseScores(const kernels::JointShape& shape, std::span<const double> fpf,
                               std::span<const double> orf, std::span<const double> weights) {
  if (weights.size() != shape.m * shape.k) throw Error("weight matrix does not match the feature shape");
  const auto joint = kernels::JointFeaturesParallel(shape, fpf, orf);
  const std::size_t d = shape.m * shape.k;
  std::vector<double> scores(shape.resources, 0.0);
  for (std::size_t r = 0; r < shape.resources; ++r) {
    for (std::size_t i = 0; i < d; ++i) scores[r] += weights[i] * joint[r * d + i];
  }
  return scores;
}

Recommender::Recommender(const map::FemGraph& fem, const HetGraph& graph, const std::vector<Oer>& oers,
                         OrfConfig config, double mu, std::vector<std::string> keyword_vocabulary)
    : fem_(fem), projection_(fem, mu, std::move(keyword_vocabulary)), orf_(graph, oers, fem, std::move(config), mu) {}

Recommendation Recommender::Recommend(const projection::QueryFormula& query, const L2RModel& model,
                                      std::size_t top_n) const {
  const std::size_t k = orf_.size();
  if (model.projecting != kFeatureCount || model.ranking != k || model.weights.size() != kFeatureCount * k) {
    throw SchemaError("model shape " + std::to_string(model.projecting) + "x" + std::to_string(model.ranking) +
                      " does not match the active features 12x" + std::to_string(k));
  }
  if (!model.ranking_features.empty() && model.ranking_features != orf_.config().Names()) {
    throw SchemaError("model was trained on a different ranking feature set");
  }

  Recommendation out;
  out.projection = projection_.Project(query);
  const auto& candidates = out.projection.candidates;

  out.attachment.anchor = out.projection.anchor;
  out.attachment.has_context = !query.context.empty();
  out.attachment.has_question = query.question.has_value() && !query.question->empty();
  double total = 0.0;
  for (const auto& c : candidates) total += c.score;
  for (const auto& c : candidates) {
    out.attachment.projection_edges.emplace_back(c.candidate, total > 0.0 ? c.score / total : 0.0);
  }

  const auto text = orf_.QueryText(query.paper_abstract, query.paper_keywords, query.weekly_topics);
  const std::size_t formulas = candidates.size();
  const std::size_t resources = orf_.resource_count();
  std::vector<double> fpf(formulas * kFeatureCount);
  std::vector<double> orf(formulas * resources * k);
  for (std::size_t f = 0; f < formulas; ++f) {
    std::copy(candidates[f].features.begin(), candidates[f].features.end(), fpf.begin() + f * kFeatureCount);
    const auto block = orf_.FormulaBlock(candidates[f].candidate, text);
    std::copy(block.begin(), block.end(), orf.begin() + f * resources * k);
  }

  const kernels::JointShape shape{formulas, resources, kFeatureCount, k};
  const auto joint = kernels::JointFeaturesParallel(shape, fpf, orf);
  const std::size_t d = kFeatureCount * k;

  // Per-formula share of each resource's score: sum_m fpf[m] * sum_k w[m,k] * orf[k].
  std::vector<double> best_share(resources, 0.0);
  std::vector<std::size_t> host(resources, formulas);
  for (std::size_t f = 0; f < formulas; ++f) {
    const auto& cand = candidates[f];
    for (std::size_t r = 0; r < resources; ++r) {
      const double* o = orf.data() + (f * resources + r) * k;
      double share = 0.0;
      for (std::size_t m = 0; m < kFeatureCount; ++m) {
        double inner = 0.0;
        for (std::size_t j = 0; j < k; ++j) inner += model.weights[m * k + j] * o[j];
        share += cand.features[m] * inner;
      }
      bool better = host[r] == formulas || share > best_share[r];
      if (!better && share == best_share[r]) {
        const auto& cur = candidates[host[r]];
        better = cand.distance < cur.distance ||
                 (cand.distance == cur.distance && fem_.vertex(cand.candidate).id < fem_.vertex(cur.candidate).id);
      }
      if (better) {
        best_share[r] = share;
        host[r] = f;
      }
    }
  }

  out.results.reserve(resources);
  for (std::size_t r = 0; r < resources; ++r) {
    RecommendedResource item;
    item.oer_id = orf_.resource(r).id;
    item.resource = r;
    item.joint.assign(joint.begin() + static_cast<std::ptrdiff_t>(r * d),
                      joint.begin() + static_cast<std::ptrdiff_t>((r + 1) * d));
    item.score = model.Score(item.joint);
    if (host[r] < formulas) {
      item.hosting_formula = fem_.vertex(candidates[host[r]].candidate).id;
      item.distance = candidates[host[r]].distance;
    }
    out.results.push_back(std::move(item));
  }
  std::sort(out.results.begin(), out.results.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.oer_id < b.oer_id;
  });
  if (top_n > 0 && out.results.size() > top_n) out.results.resize(top_n);
  return out;
}

}  // namespace fem::recsys
