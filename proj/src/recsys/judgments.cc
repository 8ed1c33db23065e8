#include "fem/recsys/judgments.h"

#include <algorithm>
#include <map>

#include "fem/common/errors.h"
#include "fem/common/log.h"

namespace fem::recsys {

using jsonl::Json;

Json JudgmentToJson(const Judgment& j) {
  Json r = {{"request_id", j.request_id}, {"oer_id", j.oer_id}, {"rating", RatingName(j.rating)}};
  r["hosting_formula"] = j.hosting_formula.empty() ? Json(nullptr) : Json(j.hosting_formula);
  r["distance"] = j.distance ? Json(*j.distance) : Json(nullptr);
  r["timestamp"] = j.timestamp;
  return r;
}

Judgment JudgmentFromJson(const Json& record, std::size_t line) {
  Judgment j;
  j.request_id = jsonl::RequireId(record, "request_id", line);
  j.oer_id = jsonl::RequireId(record, "oer_id", line);
  j.hosting_formula = jsonl::OptionalString(record, "hosting_formula");
  if (auto d = record.find("distance"); d != record.end() && d->is_number_integer()) {
    j.distance = d->get<int>();
    if (*j.distance < 0) throw CorpusFormatError("negative distance", line);
  }
  try {
    j.rating = ParseRating(jsonl::OptionalString(record, "rating"));
  } catch (const SchemaError& e) {
    throw CorpusFormatError(e.what(), line);
  }
  j.timestamp = jsonl::OptionalString(record, "timestamp");
  return j;
}

std::vector<Judgment> LoadJudgments(const std::filesystem::path& path) {
  std::vector<Judgment> out;
  jsonl::ForEachRecord(path, [&](const Json& r, std::size_t line) { out.push_back(JudgmentFromJson(r, line)); });
  return out;
}

void WriteJudgments(const std::filesystem::path& path, const std::vector<Judgment>& judgments) {
  std::vector<Json> out;
  for (const auto& j : judgments) out.push_back(JudgmentToJson(j));
  jsonl::WriteAll(path, out);
}

double AverageJudgmentDistance(std::span<const Judgment> judgments, Rating rating) {
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& j : judgments) {
    if (j.rating != rating || !j.distance) continue;
    total += *j.distance;
    ++count;
  }
  if (count == 0) {
    throw NoJudgmentsOfTypeError("no judgments rated " + std::string(RatingName(rating)));
  }
  return total / static_cast<double>(count);
}

Json FeatureRecordToJson(const FeatureRecord& r) {
  return {{"request_id", r.request_id}, {"oer_id", r.oer_id}, {"hosting_formula", r.hosting_formula},
          {"distance", r.distance},     {"x", r.features}};
}

FeatureRecord FeatureRecordFromJson(const Json& record, std::size_t line) {
  FeatureRecord r;
  r.request_id = jsonl::RequireId(record, "request_id", line);
  r.oer_id = jsonl::RequireId(record, "oer_id", line);
  r.hosting_formula = jsonl::OptionalString(record, "hosting_formula");
  r.distance = record.value("distance", 0);
  auto x = record.find("x");
  if (x == record.end() || !x->is_array()) throw CorpusFormatError("missing feature array \"x\"", line);
  r.features = x->get<std::vector<double>>();
  return r;
}

std::vector<FeatureRecord> LoadFeatureStore(const std::filesystem::path& path) {
  std::vector<FeatureRecord> out;
  jsonl::ForEachRecord(path, [&](const Json& r, std::size_t line) { out.push_back(FeatureRecordFromJson(r, line)); });
  return out;
}

void WriteFeatureStore(const std::filesystem::path& path, const std::vector<FeatureRecord>& records) {
  std::vector<Json> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(FeatureRecordToJson(r));
  jsonl::WriteAll(path, out);
}

bool RankingRequest::HasRelevant() const {
  return std::any_of(items.begin(), items.end(), [](const RankingItem& i) { return IsRelevant(i.rating); });
}

std::vector<RankingRequest> JoinJudgments(std::vector<Judgment>& judgments,
                                          const std::vector<FeatureRecord>& features,
                                          std::size_t* skipped) {
  std::map<std::pair<std::string, std::string>, const FeatureRecord*> by_pair;
  for (const auto& f : features) by_pair[{f.request_id, f.oer_id}] = &f;

  std::map<std::string, std::map<std::string, RankingItem>> grouped;
  std::size_t missing = 0;
  for (auto& j : judgments) {
    auto it = by_pair.find({j.request_id, j.oer_id});
    if (it == by_pair.end()) {
      ++missing;
      continue;
    }
    const FeatureRecord& f = *it->second;
    if (j.hosting_formula.empty()) j.hosting_formula = f.hosting_formula;
    if (!j.distance) j.distance = f.distance;
    grouped[j.request_id][j.oer_id] = {j.oer_id, f.features, j.rating, *j.distance};
  }
  if (missing > 0) log::Warning(std::to_string(missing) + " judgments have no feature record and were skipped");
  if (skipped) *skipped = missing;

  std::vector<RankingRequest> out;
  for (auto& [request, items] : grouped) {
    RankingRequest r{request, {}};
    for (auto& [oer, item] : items) r.items.push_back(std::move(item));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace fem::recsys
