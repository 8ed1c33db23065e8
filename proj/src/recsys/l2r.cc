#include "fem/recsys/l2r.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>

#include "fem/common/errors.h"
#include "fem/common/hash.h"
#include "fem/kernels/walks.h"

namespace fem::recsys {

using jsonl::Json;

L2RModel L2RModel::Uniform(std::size_t projecting, std::vector<std::string> ranking_features) {
  L2RModel m;
  m.projecting = projecting;
  m.ranking = ranking_features.size();
  m.ranking_features = std::move(ranking_features);
  m.weights.assign(m.dimension(), 1.0);
  return m;
}

double L2RModel::Score(std::span<const double> joint) const {
  if (joint.size() != weights.size()) throw Error("joint feature size does not match the model");
  double s = 0.0;
  for (std::size_t i = 0; i < joint.size(); ++i) s += weights[i] * joint[i];
  return s;
}

std::vector<double> L2RModel::ProjectionWeights() const {
  std::vector<double> out(projecting, 0.0);
  for (std::size_t m = 0; m < projecting; ++m) {
    for (std::size_t k = 0; k < ranking; ++k) out[m] += weights[m * ranking + k];
  }
  return out;
}

Json ModelToJson(const L2RModel& m) {
  return {{"format", "fem-l2r/1"},      {"projecting", m.projecting}, {"ranking", m.ranking},
          {"ranking_features", m.ranking_features}, {"weights", m.weights},
          {"objective", m.objective},   {"folds", m.folds},           {"restarts", m.restarts},
          {"seed", m.seed},             {"trained", m.trained},       {"version", m.version}};
}

L2RModel ModelFromJson(const Json& j) {
  try {
    L2RModel m;
    m.projecting = j.at("projecting").get<std::size_t>();
    m.ranking = j.at("ranking").get<std::size_t>();
    m.weights = j.at("weights").get<std::vector<double>>();
    m.ranking_features = j.value("ranking_features", std::vector<std::string>{});
    m.objective = j.value("objective", std::string("MRR"));
    m.folds = j.value("folds", std::size_t{0});
    m.restarts = j.value("restarts", std::size_t{0});
    m.seed = j.value("seed", std::uint64_t{0});
    m.trained = j.value("trained", false);
    m.version = j.value("version", 0);
    if (m.weights.size() != m.dimension()) throw ArtifactError("model weight count does not match its shape");
    return m;
  } catch (const Json::exception& e) {
    throw ArtifactError(std::string("corrupt model: ") + e.what());
  }
}

void SaveModel(const std::filesystem::path& path, const L2RModel& model) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << ModelToJson(model).dump(2) << '\n';
    if (!out) throw ArtifactError("cannot write " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

L2RModel LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArtifactError("cannot open model " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ArtifactError("corrupt model " + path.string() + ": " + e.what());
  }
  return ModelFromJson(j);
}

std::vector<std::size_t> RankItems(const RankingRequest& request, std::span<const double> weights) {
  std::vector<double> scores;
  scores.reserve(request.items.size());
  for (const auto& item : request.items) {
    double s = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) s += weights[i] * item.features[i];
    scores.push_back(s);
  }
  std::vector<std::size_t> order(request.items.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return request.items[a].oer_id < request.items[b].oer_id;
  });
  return order;
}

RankingMetrics EvaluateWeights(const std::vector<RankingRequest>& requests, std::span<const double> weights) {
  std::vector<RankingMetrics> per;
  per.reserve(requests.size());
  for (const auto& r : requests) {
    std::vector<Rating> ranked;
    for (std::size_t i : RankItems(r, weights)) ranked.push_back(r.items[i].rating);
    per.push_back(EvaluateRanking(std::span<const Rating>(ranked)));
  }
  return MacroAverage(per);
}

double MeanReciprocalRank(const std::vector<RankingRequest>& requests, std::span<const double> weights) {
  return EvaluateWeights(requests, weights).mrr;
}

namespace {

// Column-major copy of the training items with running scores, so a single
// coordinate change re-scores in O(items).
class AscentState {
 public:
  AscentState(const std::vector<RankingRequest>& requests, std::size_t dim) : dim_(dim) {
    for (const auto& r : requests) {
      const std::size_t begin = ids_.size();
      for (const auto& item : r.items) {
        if (item.features.size() != dim) throw Error("ranking item has the wrong feature count");
        ids_.push_back(&item.oer_id);
        relevant_.push_back(IsRelevant(item.rating));
      }
      bounds_.emplace_back(begin, ids_.size());
    }
    columns_.assign(dim, std::vector<double>(ids_.size()));
    std::size_t row = 0;
    for (const auto& r : requests) {
      for (const auto& item : r.items) {
        for (std::size_t j = 0; j < dim; ++j) columns_[j][row] = item.features[j];
        ++row;
      }
    }
    scores_.assign(ids_.size(), 0.0);
    trial_.assign(ids_.size(), 0.0);
  }

  void SetWeights(const std::vector<double>& w) {
    std::fill(scores_.begin(), scores_.end(), 0.0);
    for (std::size_t j = 0; j < dim_; ++j) {
      for (std::size_t i = 0; i < scores_.size(); ++i) scores_[i] += w[j] * columns_[j][i];
    }
  }

  double Objective() const { return MeanRr(scores_); }

  // Objective with coordinate j moved by `delta`.
  double Trial(std::size_t j, double delta) {
    const auto& col = columns_[j];
    for (std::size_t i = 0; i < scores_.size(); ++i) trial_[i] = scores_[i] + delta * col[i];
    return MeanRr(trial_);
  }

  void Commit(std::size_t j, double delta) {
    const auto& col = columns_[j];
    for (std::size_t i = 0; i < scores_.size(); ++i) scores_[i] += delta * col[i];
  }

 private:
  bool Outranks(const std::vector<double>& s, std::size_t a, std::size_t b) const {
    if (s[a] != s[b]) return s[a] > s[b];
    return *ids_[a] < *ids_[b];
  }

  double MeanRr(const std::vector<double>& s) const {
    if (bounds_.empty()) return 0.0;
    double total = 0.0;
    for (const auto& [begin, end] : bounds_) {
      std::size_t best = end;
      for (std::size_t i = begin; i < end; ++i) {
        if (relevant_[i] && (best == end || Outranks(s, i, best))) best = i;
      }
      if (best == end) continue;
      std::size_t ahead = 0;
      for (std::size_t i = begin; i < end; ++i) ahead += (i != best && Outranks(s, i, best));
      total += 1.0 / static_cast<double>(ahead + 1);
    }
    return total / static_cast<double>(bounds_.size());
  }

  std::size_t dim_;
  std::vector<const std::string*> ids_;
  std::vector<char> relevant_;
  std::vector<std::pair<std::size_t, std::size_t>> bounds_;
  std::vector<std::vector<double>> columns_;
  std::vector<double> scores_;
  std::vector<double> trial_;
};

std::vector<double> Grid(double lo, double hi, std::size_t points) {
  std::vector<double> g;
  if (points <= 1) return {0.5 * (lo + hi)};
  for (std::size_t i = 0; i < points; ++i) {
    g.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  return g;
}

std::size_t Dimension(const std::vector<RankingRequest>& requests) {
  for (const auto& r : requests) {
    if (!r.items.empty()) return r.items.front().features.size();
  }
  return 0;
}

AscentResult BestOfRestarts(const std::vector<RankingRequest>& requests, std::size_t dim,
                            const TrainOptions& options) {
  AscentResult best;
  bool have = false;
  const std::size_t restarts = std::max<std::size_t>(1, options.restarts);
  for (std::size_t r = 0; r < restarts; ++r) {
    std::vector<double> start(dim, 1.0);
    if (r > 0) {
      std::mt19937_64 rng(SplitMix64(options.seed + r));
      for (double& w : start) w = 2.0 * kernels::UnitDouble(rng()) - 1.0;
    }
    AscentResult run = CoordinateAscent(requests, std::move(start), options.ascent);
    if (!have || run.objective > best.objective) {
      best = std::move(run);
      have = true;
    }
  }
  return best;
}

}  // namespace

AscentResult CoordinateAscent(const std::vector<RankingRequest>& requests, std::vector<double> start,
                              const CoordinateAscentOptions& options) {
  const std::size_t dim = start.size();
  AscentState state(requests, dim);
  state.SetWeights(start);
  AscentResult result;
  result.weights = std::move(start);
  result.objective = state.Objective();
  result.trace.push_back(result.objective);
  const auto grid = Grid(options.grid_low, options.grid_high, options.grid_points);

  for (std::size_t sweep = 0; sweep < options.max_sweeps; ++sweep) {
    bool improved = false;
    for (std::size_t j = 0; j < dim; ++j) {
      const double current = result.weights[j];
      double best_value = current;
      double best_objective = result.objective;
      auto consider = [&](double value) {
        const double obj = state.Trial(j, value - current);
        if (obj > best_objective) {
          best_objective = obj;
          best_value = value;
        }
      };
      for (double v : grid) consider(v);
      const double center = best_value;
      for (double v : Grid(center - options.refine_radius, center + options.refine_radius, options.grid_points)) {
        consider(v);
      }
      if (best_objective > result.objective + options.min_gain) {
        state.Commit(j, best_value - current);
        result.weights[j] = best_value;
        result.objective = best_objective;
        result.trace.push_back(best_objective);
        improved = true;
      }
    }
    if (!improved) break;
  }
  return result;
}

TrainReport TrainL2R(const std::vector<RankingRequest>& requests, std::size_t projecting,
                     std::vector<std::string> ranking_features, const TrainOptions& options) {
  const std::size_t with_relevant = static_cast<std::size_t>(
      std::count_if(requests.begin(), requests.end(), [](const RankingRequest& r) { return r.HasRelevant(); }));
  if (with_relevant < kMinRelevantRequests) {
    throw InsufficientDataError("training needs at least " + std::to_string(kMinRelevantRequests) +
                                    " requests with a Good or OK judgment, found " + std::to_string(with_relevant),
                                kMinRelevantRequests);
  }
  const std::size_t dim = projecting * ranking_features.size();
  if (Dimension(requests) != dim) throw Error("feature vectors do not match the model shape");

  TrainReport report;
  // Deterministic fold assignment.
  std::vector<std::size_t> order(requests.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 shuffle_rng(SplitMix64(options.seed));
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[static_cast<std::size_t>(shuffle_rng() % i)]);
  }
  const std::size_t folds = std::min(options.folds, requests.size());
  if (folds >= 2) {
    report.folds.resize(folds);
    std::vector<std::vector<RankingMetrics>> held_out(folds);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t f = 0; f < folds; ++f) {
      std::vector<RankingRequest> train, test;
      for (std::size_t i = 0; i < order.size(); ++i) {
        (i % folds == f ? test : train).push_back(requests[order[i]]);
      }
      const AscentResult fit = BestOfRestarts(train, dim, options);
      FoldReport& fr = report.folds[f];
      fr.fold = f;
      fr.train_requests = train.size();
      fr.test_requests = test.size();
      fr.train_mrr = fit.objective;
      fr.test = EvaluateWeights(test, fit.weights);
      for (const auto& r : test) {
        held_out[f].push_back(EvaluateWeights({r}, fit.weights));
      }
    }
    std::vector<RankingMetrics> all;
    for (const auto& h : held_out) all.insert(all.end(), h.begin(), h.end());
    report.cv = MacroAverage(all);
  }

  const AscentResult final_fit = BestOfRestarts(requests, dim, options);
  report.trace = final_fit.trace;
  report.model = L2RModel::Uniform(projecting, std::move(ranking_features));
  report.model.weights = final_fit.weights;
  report.model.folds = folds;
  report.model.restarts = options.restarts;
  report.model.seed = options.seed;
  report.model.trained = true;
  return report;
}

}  // namespace fem::recsys
