#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fem::text {

using TermId = std::uint32_t;
inline constexpr TermId kUnknownTerm = std::numeric_limits<TermId>::max();

class Vocabulary {
 public:
  TermId Intern(const std::string& token);
  std::optional<TermId> Find(const std::string& token) const;
  const std::string& Token(TermId id) const { return tokens_.at(id); }
  std::size_t size() const { return tokens_.size(); }

 private:
  std::unordered_map<std::string, TermId> ids_;
  std::vector<std::string> tokens_;
};

// Sparse term counts sorted by id. `kUnknownTerm`, when present, is last and
// aggregates tokens absent from the collection.
struct TermBag {
  std::vector<std::pair<TermId, std::uint32_t>> counts;
  std::uint64_t length = 0;

  std::uint32_t Count(TermId id) const;
  bool empty() const { return length == 0; }
};

// Document collection with Dirichlet-smoothed query likelihood:
//   p(w|d) = (c(w,d) + mu * p(w|C)) / (|d| + mu)
// p(w|C) is the collection frequency ratio; tokens never seen in the
// collection get the floor 1 / (total_tokens + vocabulary_size).
class Collection {
 public:
  explicit Collection(double mu = 2000.0) : mu_(mu) {}

  // Adds a document and folds it into the collection statistics.
  std::size_t AddDocument(std::string_view text);
  std::size_t AddTokens(const std::vector<std::string>& tokens);

  // Bag over this collection's vocabulary; does not modify statistics.
  TermBag MakeQuery(std::string_view text) const;
  TermBag MakeQueryFromTokens(const std::vector<std::string>& tokens) const;

  const TermBag& Document(std::size_t index) const { return docs_.at(index); }
  std::size_t size() const { return docs_.size(); }
  std::uint64_t total_tokens() const { return total_; }
  const Vocabulary& vocabulary() const { return vocab_; }

  double mu() const { return mu_; }
  void set_mu(double mu) { mu_ = mu; }

  double BackgroundProbability(TermId id) const;
  double UnseenFloor() const;

  // log p(query | doc). -infinity when some query token has zero probability
  // (only possible with mu = 0).
  double LogLikelihood(const TermBag& query, const TermBag& doc) const;
  double LogLikelihood(const TermBag& query, std::size_t doc) const {
    return LogLikelihood(query, docs_.at(doc));
  }

 private:
  double mu_;
  Vocabulary vocab_;
  std::vector<std::uint64_t> collection_counts_;
  std::uint64_t total_ = 0;
  std::vector<TermBag> docs_;
};

// Posterior over candidates under a uniform prior: softmax of the
// log-likelihoods. Entries at -infinity get 0; all -infinity gives all 0.
std::vector<double> Posterior(std::span<const double> log_likelihoods);

}  // namespace fem::text
