#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fem/common/jsonl.h"
#include "fem/recsys/metrics.h"

namespace fem::recsys {

struct Judgment {
  std::string request_id;
  std::string oer_id;
  std::string hosting_formula;  // empty until joined with the feature store
  std::optional<int> distance;  // hops from hosting formula to the target
  Rating rating = Rating::kBad;
  std::string timestamp;
};

jsonl::Json JudgmentToJson(const Judgment& j);
Judgment JudgmentFromJson(const jsonl::Json& record, std::size_t line);

std::vector<Judgment> LoadJudgments(const std::filesystem::path& path);
void WriteJudgments(const std::filesystem::path& path, const std::vector<Judgment>& judgments);

// Mean hop distance over judgments with `rating` that carry a distance.
// Throws NoJudgmentsOfTypeError when there are none.
double AverageJudgmentDistance(std::span<const Judgment> judgments, Rating rating);

// Joint feature vector of one recommended resource for one request.
struct FeatureRecord {
  std::string request_id;
  std::string oer_id;
  std::string hosting_formula;
  int distance = 0;
  std::vector<double> features;
};

jsonl::Json FeatureRecordToJson(const FeatureRecord& r);
FeatureRecord FeatureRecordFromJson(const jsonl::Json& record, std::size_t line);
std::vector<FeatureRecord> LoadFeatureStore(const std::filesystem::path& path);
void WriteFeatureStore(const std::filesystem::path& path, const std::vector<FeatureRecord>& records);

struct RankingItem {
  std::string oer_id;
  std::vector<double> features;
  Rating rating = Rating::kBad;
  int distance = 0;
};

struct RankingRequest {
  std::string request_id;
  std::vector<RankingItem> items;  // ascending oer_id

  bool HasRelevant() const;
};

// Joins judgments with their feature records. A later judgment of the same
// (request, resource) replaces an earlier one; judgments without features are
// skipped. Fills a missing hosting formula and distance on `judgments`.
// Requests come out in ascending id order.
std::vector<RankingRequest> JoinJudgments(std::vector<Judgment>& judgments,
                                          const std::vector<FeatureRecord>& features,
                                          std::size_t* skipped = nullptr);

}  // namespace fem::recsys
