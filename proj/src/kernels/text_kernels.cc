#include "fem/kernels/text_kernels.h"

#include <algorithm>
#include <limits>

namespace fem::kernels {

std::vector<double> LogLikelihoodsSerial(const text::Collection& collection,
                                         const text::TermBag& query) {
  std::vector<double> out(collection.size());
  for (std::size_t d = 0; d < out.size(); ++d) out[d] = collection.LogLikelihood(query, d);
  return out;
}

std::vector<double> LogLikelihoodsParallel(const text::Collection& collection,
                                           const text::TermBag& query) {
  std::vector<double> out(collection.size());
  const std::size_t n = out.size();
#pragma omp parallel for schedule(static)
  for (std::size_t d = 0; d < n; ++d) out[d] = collection.LogLikelihood(query, d);
  return out;
}

namespace {

constexpr int kNoYear = std::numeric_limits<int>::max();

void ScanDocument(const text::PhraseMatcher& matcher, const DatedDocument& doc,
                  std::vector<int>& earliest) {
  for (const auto& m : matcher.FindAll(std::span<const std::string>(doc.tokens))) {
    earliest[m.phrase] = std::min(earliest[m.phrase], doc.year);
  }
}

std::vector<std::optional<int>> Finish(const std::vector<int>& earliest) {
  std::vector<std::optional<int>> out(earliest.size());
  for (std::size_t i = 0; i < earliest.size(); ++i) {
    if (earliest[i] != kNoYear) out[i] = earliest[i];
  }
  return out;
}

}  // namespace

std::vector<std::optional<int>> EarliestMatchYearSerial(const text::PhraseMatcher& matcher,
                                                        const std::vector<DatedDocument>& docs) {
  std::vector<int> earliest(matcher.size(), kNoYear);
  for (const auto& doc : docs) ScanDocument(matcher, doc, earliest);
  return Finish(earliest);
}

std::vector<std::optional<int>> EarliestMatchYearParallel(const text::PhraseMatcher& matcher,
                                                          const std::vector<DatedDocument>& docs) {
  std::vector<int> earliest(matcher.size(), kNoYear);
  const std::size_t n = docs.size();
#pragma omp parallel
  {
    std::vector<int> local(matcher.size(), kNoYear);
#pragma omp for schedule(dynamic, 16) nowait
    for (std::size_t i = 0; i < n; ++i) ScanDocument(matcher, docs[i], local);
#pragma omp critical(fem_earliest_merge)
    for (std::size_t p = 0; p < local.size(); ++p) earliest[p] = std::min(earliest[p], local[p]);
  }
  return Finish(earliest);
}

}  // namespace fem::kernels
