#include "fem/recsys/metrics.h"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "fem/common/errors.h"

namespace fem::recsys {
namespace {

int GainOf(const std::optional<Rating>& r) { return r ? Gain(*r) : 0; }
bool RelevantOf(const std::optional<Rating>& r) { return r && IsRelevant(*r); }

double Dcg(const std::vector<int>& gains, std::size_t k) {
  double dcg = 0.0;
  for (std::size_t i = 0; i < std::min(k, gains.size()); ++i) {
    dcg += gains[i] / std::log2(static_cast<double>(i) + 2.0);
  }
  return dcg;
}

double PrecisionAt(std::span<const std::optional<Rating>> ranked, std::size_t k) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) hits += RelevantOf(ranked[i]);
  return static_cast<double>(hits) / static_cast<double>(k);
}

}  // namespace

std::string_view RatingName(Rating rating) {
  switch (rating) {
    case Rating::kGood: return "Good";
    case Rating::kOK: return "OK";
    case Rating::kBad: return "Bad";
  }
  return "Bad";
}

Rating ParseRating(std::string_view name) {
  std::string lower(name);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "good") return Rating::kGood;
  if (lower == "ok") return Rating::kOK;
  if (lower == "bad") return Rating::kBad;
  throw SchemaError("unknown rating \"" + std::string(name) + "\"");
}

double NdcgAt(std::span<const std::optional<Rating>> ranked, std::size_t k) {
  std::vector<int> gains;
  gains.reserve(ranked.size());
  for (const auto& r : ranked) gains.push_back(GainOf(r));
  std::vector<int> ideal = gains;
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double idcg = Dcg(ideal, k);
  return idcg > 0.0 ? Dcg(gains, k) / idcg : 0.0;
}

double ReciprocalRank(std::span<const std::optional<Rating>> ranked) {
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (RelevantOf(ranked[i])) return 1.0 / static_cast<double>(i + 1);
  }
  return 0.0;
}

RankingMetrics EvaluateRanking(std::span<const std::optional<Rating>> ranked) {
  RankingMetrics m;
  m.ndcg3 = NdcgAt(ranked, 3);
  m.ndcg5 = NdcgAt(ranked, 5);
  m.ndcg_all = NdcgAt(ranked, ranked.size());
  m.p3 = PrecisionAt(ranked, 3);
  m.p5 = PrecisionAt(ranked, 5);
  std::size_t hits = 0;
  double precision_sum = 0.0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (!RelevantOf(ranked[i])) continue;
    ++hits;
    precision_sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  m.map = hits > 0 ? precision_sum / static_cast<double>(hits) : 0.0;
  m.mrr = ReciprocalRank(ranked);
  return m;
}

RankingMetrics EvaluateRanking(std::span<const Rating> ranked) {
  std::vector<std::optional<Rating>> wrapped(ranked.begin(), ranked.end());
  return EvaluateRanking(std::span<const std::optional<Rating>>(wrapped));
}

RankingMetrics MacroAverage(std::span<const RankingMetrics> per_request) {
  RankingMetrics avg;
  if (per_request.empty()) return avg;
  for (const auto& m : per_request) {
    avg.ndcg3 += m.ndcg3;
    avg.ndcg5 += m.ndcg5;
    avg.ndcg_all += m.ndcg_all;
    avg.p3 += m.p3;
    avg.p5 += m.p5;
    avg.map += m.map;
    avg.mrr += m.mrr;
  }
  const double n = static_cast<double>(per_request.size());
  avg.ndcg3 /= n;
  avg.ndcg5 /= n;
  avg.ndcg_all /= n;
  avg.p3 /= n;
  avg.p5 /= n;
  avg.map /= n;
  avg.mrr /= n;
  return avg;
}

}  // namespace fem::recsys
