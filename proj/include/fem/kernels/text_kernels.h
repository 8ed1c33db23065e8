#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fem/text/language_model.h"
#include "fem/text/phrase_matcher.h"

namespace fem::kernels {

// log p(query | d) for every document of the collection, in document order.
std::vector<double> LogLikelihoodsSerial(const text::Collection& collection,
                                         const text::TermBag& query);
std::vector<double> LogLikelihoodsParallel(const text::Collection& collection,
                                           const text::TermBag& query);

struct DatedDocument {
  int year = 0;
  std::vector<std::string> tokens;
};

// For each phrase of `matcher`, the smallest year among documents in which
// the greedy scan matches it; nullopt when it never matches.
std::vector<std::optional<int>> EarliestMatchYearSerial(const text::PhraseMatcher& matcher,
                                                        const std::vector<DatedDocument>& docs);
std::vector<std::optional<int>> EarliestMatchYearParallel(const text::PhraseMatcher& matcher,
                                                          const std::vector<DatedDocument>& docs);

}  // namespace fem::kernels
