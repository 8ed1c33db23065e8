#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fem::recsys {

enum class Rating { kBad = 0, kOK = 1, kGood = 2 };

std::string_view RatingName(Rating rating);       // "Bad", "OK", "Good"
Rating ParseRating(std::string_view name);        // case-insensitive; throws SchemaError

// Graded gain: Good 2, OK 1, Bad 0.
inline int Gain(Rating r) { return static_cast<int>(r); }
// Binary relevance: Good or OK.
inline bool IsRelevant(Rating r) { return r != Rating::kBad; }

struct RankingMetrics {
  double ndcg3 = 0.0;
  double ndcg5 = 0.0;
  double ndcg_all = 0.0;
  double p3 = 0.0;
  double p5 = 0.0;
  double map = 0.0;
  double mrr = 0.0;
};

// Metrics of one ranked list; entries without a rating count as Bad.
// NDCG@k divides by the ideal DCG@k of the same ratings (0 when that is 0);
// P@k divides by k; AP averages precision at each relevant rank.
RankingMetrics EvaluateRanking(std::span<const std::optional<Rating>> ranked);
RankingMetrics EvaluateRanking(std::span<const Rating> ranked);

double NdcgAt(std::span<const std::optional<Rating>> ranked, std::size_t k);
double ReciprocalRank(std::span<const std::optional<Rating>> ranked);

RankingMetrics MacroAverage(std::span<const RankingMetrics> per_request);

}  // namespace fem::recsys
