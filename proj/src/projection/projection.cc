#include "fem/projection/projection.h"

#include <algorithm>
#include <numeric>

#include "fem/common/errors.h"
#include "fem/formula/mathml_parser.h"
#include "fem/formula/terms.h"
#include "fem/kernels/text_kernels.h"
#include "fem/text/tokenize.h"

namespace fem::projection {
namespace {

double Mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double RankingScore(const FeatureVector& f, std::span<const double> weights) {
  if (weights.empty()) return Mean(f);
  double s = 0.0;
  for (std::size_t i = 0; i < kFeatureCount; ++i) s += weights[i] * f[i];
  return s;
}

}  // namespace

ProjectionIndex::ProjectionIndex(const map::FemGraph& graph, double mu,
                                 std::vector<std::string> keyword_vocabulary)
    : graph_(graph), contexts_(mu) {
  for (const auto& v : graph_.vertices()) contexts_.AddDocument(v.context);
  for (const auto& k : keyword_vocabulary) {
    if (vocabulary_.Add(k) != text::PhraseMatcher::npos) has_vocabulary_ = true;
  }
}

std::vector<double> ProjectionIndex::TextPosterior(std::string_view text) const {
  const auto query = contexts_.MakeQuery(text);
  if (query.empty()) return std::vector<double>(graph_.size(), 0.0);
  return text::Posterior(kernels::LogLikelihoodsParallel(contexts_, query));
}

std::vector<double> ProjectionIndex::PhraseSum(const std::vector<std::string>& phrases) const {
  std::vector<double> total(graph_.size(), 0.0);
  for (const auto& phrase : phrases) {
    const auto posterior = TextPosterior(phrase);
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += posterior[i];
  }
  return total;
}

std::vector<std::string> ProjectionIndex::Keywords(std::string_view text,
                                                   const QueryFormula& query) const {
  if (has_vocabulary_) return text::ExtractKeywords(text, vocabulary_);
  text::PhraseMatcher fallback;
  for (const auto& k : query.paper_keywords) fallback.Add(k);
  for (const auto& w : query.weekly_topics) fallback.Add(w);
  return text::ExtractKeywords(text, fallback);
}

std::vector<FeatureVector> ProjectionIndex::DirectFeatures(const QueryFormula& query) const {
  if (graph_.size() == 0) throw EmptyMapError("the evolution map has no formulae");
  formula::TermSet query_terms;
  try {
    query_terms = formula::ExtractTerms(formula::ParseFormula(query.latex));
  } catch (const ParseError& e) {
    throw NoParseError(std::string("query formula does not parse: ") + e.what(), e.offset());
  }

  const std::size_t n = graph_.size();
  std::vector<FeatureVector> rows(n, FeatureVector{});
  auto fill = [&](Feature slot, const std::vector<double>& values) {
    for (std::size_t i = 0; i < n; ++i) rows[i][slot] = values[i];
  };
  fill(kContext, TextPosterior(query.context));
  fill(kContextKeywords, PhraseSum(Keywords(query.context, query)));
  if (query.question && !query.question->empty()) {
    fill(kQuestion, TextPosterior(*query.question));
    fill(kQuestionKeywords, PhraseSum(Keywords(*query.question, query)));
  }
  for (std::size_t i = 0; i < n; ++i) {
    rows[i][kLayout] = formula::LayoutTransition(graph_.vertex(static_cast<VertexId>(i)).terms, query_terms);
  }
  fill(kAbstract, TextPosterior(query.paper_abstract));
  fill(kPaperKeywords, PhraseSum(query.paper_keywords));
  fill(kWeeklyTopics, PhraseSum(query.weekly_topics));
  return rows;
}

ProjectionResult ProjectionIndex::Project(const QueryFormula& query, std::size_t top_n,
                                          std::span<const double> weights) const {
  if (!weights.empty() && weights.size() != kFeatureCount) {
    throw Error("projection weights must have 12 entries");
  }
  const auto direct = DirectFeatures(query);

  ProjectionResult result;
  double best = -1.0;
  for (VertexId v = 0; v < direct.size(); ++v) {
    const double m = Mean(std::span<const double>(direct[v].data(), kDirectFeatures));
    if (m > best || (m == best && graph_.vertex(v).id < graph_.vertex(result.anchor).id)) {
      best = m;
      result.anchor = v;
    }
  }
  const VertexId anchor = result.anchor;
  const auto hops = map::UndirectedHops(graph_, anchor, kNeighbourhoodDepth);

  std::vector<VertexId> members;
  for (VertexId v = 0; v < hops.size(); ++v) {
    if (hops[v] >= 0) members.push_back(v);
  }
  const auto anchor_context = text::Posterior([&] {
    std::vector<double> ll;
    const auto& query_bag = contexts_.Document(anchor);
    for (VertexId v : members) ll.push_back(contexts_.LogLikelihood(query_bag, v));
    return ll;
  }());
  const auto& anchor_terms = graph_.vertex(anchor).terms;

  for (std::size_t i = 0; i < members.size(); ++i) {
    const VertexId c = members[i];
    ProjectionScore s;
    s.candidate = c;
    s.anchor = anchor;
    s.distance = hops[c];
    s.features = direct[c];
    s.features[kAnchorContext] = anchor_context[i];
    s.features[kAnchorLayout] = formula::LayoutTransition(graph_.vertex(c).terms, anchor_terms);
    s.features[kGenerality] = graph_.vertex(c).generality;
    s.features[kDistance] = static_cast<double>(hops[c]);
    s.score = RankingScore(s.features, weights);
    result.candidates.push_back(s);
  }
  std::sort(result.candidates.begin(), result.candidates.end(),
            [&](const ProjectionScore& a, const ProjectionScore& b) {
              if (a.score != b.score) return a.score > b.score;
              return graph_.vertex(a.candidate).id < graph_.vertex(b.candidate).id;
            });
  if (top_n > 0 && result.candidates.size() > top_n) result.candidates.resize(top_n);
  return result;
}

}  // namespace fem::projection
