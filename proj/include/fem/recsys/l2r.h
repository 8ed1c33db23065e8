#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fem/common/jsonl.h"
#include "fem/recsys/judgments.h"
#include "fem/recsys/metrics.h"

namespace fem::recsys {

// Bilinear weights over (projecting feature m, ranking feature k), stored
// row-major as m * ranking + k.
struct L2RModel {
  std::size_t projecting = 12;
  std::size_t ranking = 0;
  std::vector<double> weights;
  std::vector<std::string> ranking_features;
  std::string objective = "MRR";
  std::size_t folds = 0;
  std::size_t restarts = 0;
  std::uint64_t seed = 0;
  bool trained = false;
  int version = 0;

  // All-ones weights; the untrained default.
  static L2RModel Uniform(std::size_t projecting, std::vector<std::string> ranking_features);

  std::size_t dimension() const { return projecting * ranking; }
  double Score(std::span<const double> joint) const;
  // Row sums: one weight per projecting feature.
  std::vector<double> ProjectionWeights() const;
};

jsonl::Json ModelToJson(const L2RModel& model);
L2RModel ModelFromJson(const jsonl::Json& json);  // throws ArtifactError
void SaveModel(const std::filesystem::path& path, const L2RModel& model);
L2RModel LoadModel(const std::filesystem::path& path);

struct CoordinateAscentOptions {
  std::size_t grid_points = 21;
  double grid_low = -2.0;
  double grid_high = 2.0;
  double refine_radius = 0.2;  // second pass around the best grid point
  double min_gain = 1e-6;      // smaller improvements are rejected
  std::size_t max_sweeps = 50;
};

struct TrainOptions {
  std::size_t folds = 10;
  std::size_t restarts = 5;
  std::uint64_t seed = 7;
  CoordinateAscentOptions ascent;
};

struct AscentResult {
  std::vector<double> weights;
  double objective = 0.0;
  std::vector<double> trace;  // objective at the start and after each accepted update
};

// Items ranked by descending score, ties by ascending resource id.
std::vector<std::size_t> RankItems(const RankingRequest& request, std::span<const double> weights);

double MeanReciprocalRank(const std::vector<RankingRequest>& requests, std::span<const double> weights);
RankingMetrics EvaluateWeights(const std::vector<RankingRequest>& requests, std::span<const double> weights);

// Cyclic coordinate ascent on mean reciprocal rank from `start`.
AscentResult CoordinateAscent(const std::vector<RankingRequest>& requests, std::vector<double> start,
                              const CoordinateAscentOptions& options = {});

struct FoldReport {
  std::size_t fold = 0;
  std::size_t train_requests = 0;
  std::size_t test_requests = 0;
  double train_mrr = 0.0;
  RankingMetrics test;
};

struct TrainReport {
  L2RModel model;
  std::vector<FoldReport> folds;
  RankingMetrics cv;          // macro average over all held-out requests
  std::vector<double> trace;  // best restart of the final model
};

inline constexpr std::size_t kMinRelevantRequests = 2;

// Best of `restarts` coordinate-ascent runs (first from all ones, the rest
// from uniform [-1, 1]), cross-validated over `folds` request folds, then
// refit on everything. Throws InsufficientDataError when fewer than two
// requests have a Good or OK judgment.
TrainReport TrainL2R(const std::vector<RankingRequest>& requests, std::size_t projecting,
                     std::vector<std::string> ranking_features, const TrainOptions& options = {});

}  // namespace fem::recsys
