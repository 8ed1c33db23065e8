#include "fem/text/language_model.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "fem/text/tokenize.h"

namespace fem::text {

TermId Vocabulary::Intern(const std::string& token) {
  auto [it, inserted] = ids_.try_emplace(token, static_cast<TermId>(tokens_.size()));
  if (inserted) tokens_.push_back(token);
  return it->second;
}

std::optional<TermId> Vocabulary::Find(const std::string& token) const {
  auto it = ids_.find(token);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t TermBag::Count(TermId id) const {
  auto it = std::lower_bound(counts.begin(), counts.end(), id,
                             [](const auto& entry, TermId key) { return entry.first < key; });
  return (it != counts.end() && it->first == id) ? it->second : 0;
}

namespace {

template <typename IdOf>
TermBag MakeBag(const std::vector<std::string>& tokens, IdOf id_of) {
  std::map<TermId, std::uint32_t> counts;
  for (const auto& token : tokens) ++counts[id_of(token)];
  TermBag bag;
  bag.counts.assign(counts.begin(), counts.end());
  bag.length = tokens.size();
  return bag;
}

}  // namespace

std::size_t Collection::AddTokens(const std::vector<std::string>& tokens) {
  TermBag bag = MakeBag(tokens, [this](const std::string& t) { return vocab_.Intern(t); });
  collection_counts_.resize(vocab_.size(), 0);
  for (const auto& [id, count] : bag.counts) collection_counts_[id] += count;
  total_ += bag.length;
  docs_.push_back(std::move(bag));
  return docs_.size() - 1;
}

std::size_t Collection::AddDocument(std::string_view text) { return AddTokens(Tokenize(text)); }

TermBag Collection::MakeQueryFromTokens(const std::vector<std::string>& tokens) const {
  return MakeBag(tokens, [this](const std::string& t) {
    auto id = vocab_.Find(t);
    return id ? *id : kUnknownTerm;
  });
}

TermBag Collection::MakeQuery(std::string_view text) const {
  return MakeQueryFromTokens(Tokenize(text));
}

double Collection::UnseenFloor() const {
  const double denom = static_cast<double>(total_) + static_cast<double>(vocab_.size());
  return denom > 0.0 ? 1.0 / denom : 1.0;
}

double Collection::BackgroundProbability(TermId id) const {
  if (id == kUnknownTerm || id >= collection_counts_.size() || total_ == 0) return UnseenFloor();
  return static_cast<double>(collection_counts_[id]) / static_cast<double>(total_);
}

double Collection::LogLikelihood(const TermBag& query, const TermBag& doc) const {
  const double denom = static_cast<double>(doc.length) + mu_;
  if (denom <= 0.0) return query.empty() ? 0.0 : -std::numeric_limits<double>::infinity();
  const double log_denom = std::log(denom);
  double total = 0.0;
  // Both bags are sorted by id, so a merge walk finds document counts.
  auto d = doc.counts.begin();
  for (const auto& [id, qcount] : query.counts) {
    while (d != doc.counts.end() && d->first < id) ++d;
    const double c = (id != kUnknownTerm && d != doc.counts.end() && d->first == id) ? d->second : 0.0;
    const double numer = c + mu_ * BackgroundProbability(id);
    if (numer <= 0.0) return -std::numeric_limits<double>::infinity();
    total += qcount * (std::log(numer) - log_denom);
  }
  return total;
}

std::vector<double> Posterior(std::span<const double> log_likelihoods) {
  std::vector<double> out(log_likelihoods.size(), 0.0);
  double best = -std::numeric_limits<double>::infinity();
  for (double v : log_likelihoods) best = std::max(best, v);
  if (!std::isfinite(best)) return out;
  double sum = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::isfinite(log_likelihoods[i]) ? std::exp(log_likelihoods[i] - best) : 0.0;
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

}  // namespace fem::text
