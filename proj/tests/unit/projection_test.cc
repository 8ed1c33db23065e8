#include <gtest/gtest.h>

#include <numeric>
#include <thread>

#include "fem/common/errors.h"
#include "fem/projection/projection.h"
#include "fixture.h"

namespace fem::projection {
namespace {

using map::EvolutionEdge;
using map::FemGraph;
using map::FormulaVertex;

// a -> b -> c -> d -> e -> f, plus an isolated g.
FemGraph ChainMap() {
  std::vector<FormulaVertex> v{
      testing::MakeVertex("a", "x+y", "addition of two real numbers", 0.10),
      testing::MakeVertex("b", "x^{2}+y^{2}", "sum of squares of two numbers", 0.15),
      testing::MakeVertex("c", "\\sqrt{x^{2}+y^{2}}", "euclidean norm of a vector in the plane", 0.20),
      testing::MakeVertex("d", "\\sqrt{\\sum_{i}x_{i}^{2}}", "euclidean norm in many dimensions", 0.20),
      testing::MakeVertex("e", "\\|x-y\\|", "distance between two vectors", 0.15),
      testing::MakeVertex("f", "e^{-\\|x-y\\|^{2}}", "gaussian kernel similarity", 0.10),
      testing::MakeVertex("g", "\\int_{a}^{b}f(x)dx", "definite integral of a function", 0.10),
  };
  std::vector<EvolutionEdge> e;
  for (map::VertexId i = 0; i + 1 < 6; ++i) e.push_back({i, i + 1, 0.8});
  return FemGraph(std::move(v), std::move(e), {});
}

QueryFormula NormQuery() {
  QueryFormula q;
  q.latex = "\\sqrt{x^{2}+y^{2}}";
  q.context = "euclidean norm of a vector in the plane";
  q.paper_abstract = "we study the norm of vectors";
  q.paper_keywords = {"euclidean norm"};
  q.weekly_topics = {"vector"};
  return q;
}

TEST(Projection, ExactMatchBecomesAnchorAtDistanceZero) {
  const FemGraph g = ChainMap();
  const ProjectionIndex index(g);
  const ProjectionResult r = index.Project(NormQuery());
  EXPECT_EQ(r.anchor, 2u);
  const auto self = std::find_if(r.candidates.begin(), r.candidates.end(),
                                 [](const ProjectionScore& s) { return s.distance == 0; });
  ASSERT_NE(self, r.candidates.end());
  EXPECT_EQ(self->candidate, r.anchor);
  EXPECT_DOUBLE_EQ(self->features[kLayout], 1.0);
  EXPECT_DOUBLE_EQ(self->features[kAnchorLayout], 1.0);
  EXPECT_EQ(self->features[kDistance], 0.0);
}

TEST(Projection, AbsentQuestionZeroesQuestionRows) {
  const FemGraph g = ChainMap();
  const ProjectionIndex index(g);
  for (const auto& f : index.DirectFeatures(NormQuery())) {
    EXPECT_EQ(f[kQuestion], 0.0);
    EXPECT_EQ(f[kQuestionKeywords], 0.0);
  }
  QueryFormula with_question = NormQuery();
  with_question.question = "what is the euclidean norm";
  const auto rows = index.DirectFeatures(with_question);
  double question_mass = 0.0;
  for (const auto& f : rows) question_mass += f[kQuestion];
  EXPECT_NEAR(question_mass, 1.0, 1e-9);
}

TEST(Projection, NeighbourhoodMatchesHopDistances) {
  const FemGraph g = ChainMap();
  const ProjectionIndex index(g);
  const ProjectionResult r = index.Project(NormQuery());
  // Anchor c reaches a..f within three hops; g is disconnected.
  const std::vector<int> hops{2, 1, 0, 1, 2, 3, -1};
  ASSERT_EQ(r.candidates.size(), 6u);
  for (const auto& s : r.candidates) {
    ASSERT_GE(hops[s.candidate], 0);
    EXPECT_EQ(s.distance, hops[s.candidate]);
    EXPECT_EQ(s.features[kDistance], static_cast<double>(hops[s.candidate]));
    EXPECT_EQ(s.anchor, r.anchor);
    EXPECT_EQ(s.features[kGenerality], g.vertex(s.candidate).generality);
  }
}

TEST(Projection, SimilarityRowsStayInUnitInterval) {
  const FemGraph g = ChainMap();
  const ProjectionIndex index(g);
  QueryFormula q = NormQuery();
  q.question = "norm of a vector";
  for (const auto& s : index.Project(q).candidates) {
    for (std::size_t k = 0; k < kDistance; ++k) EXPECT_GE(s.features[k], 0.0) << k;
    EXPECT_LE(s.features[kLayout], 1.0);
    EXPECT_LE(s.features[kAnchorLayout], 1.0);
    EXPECT_LE(s.features[kContext], 1.0);
  }
}

TEST(Projection, UniformRankingIsTheFeatureMean) {
  const FemGraph g = ChainMap();
  const ProjectionIndex index(g);
  const auto r = index.Project(NormQuery());
  for (std::size_t i = 0; i < r.candidates.size(); ++i) {
    const auto& f = r.candidates[i].features;
    EXPECT_NEAR(r.candidates[i].score, std::accumulate(f.begin(), f.end(), 0.0) / kFeatureCount, 1e-12);
    if (i > 0) EXPECT_GE(r.candidates[i - 1].score, r.candidates[i].score);
  }
}

TEST(Projection, WeightsOrderCandidates) {
  const FemGraph g = ChainMap();
  const ProjectionIndex index(g);
  std::vector<double> weights(kFeatureCount, 0.0);
  weights[kDistance] = -1.0;
  const auto r = index.Project(NormQuery(), 3, weights);
  ASSERT_EQ(r.candidates.size(), 3u);
  EXPECT_EQ(r.candidates[0].candidate, 2u);
  EXPECT_EQ(r.candidates[1].candidate, 1u);  // ties at one hop go to the smaller id
  EXPECT_EQ(r.candidates[2].candidate, 3u);
  EXPECT_EQ(r.candidates[1].score, -1.0);

  const std::vector<double> wrong_size(3, 1.0);
  EXPECT_THROW(index.Project(NormQuery(), 0, wrong_size), Error);
}

TEST(Projection, UnparseableQueryAndEmptyMap) {
  const FemGraph g = ChainMap();
  const ProjectionIndex index(g);
  QueryFormula bad = NormQuery();
  bad.latex = "\\frac{1}";
  try {
    index.Project(bad);
    FAIL() << "expected NoParseError";
  } catch (const NoParseError& e) {
    EXPECT_EQ(e.offset(), 8u);
  }
  const FemGraph empty;
  EXPECT_THROW(ProjectionIndex(empty).Project(NormQuery()), EmptyMapError);
}

TEST(Projection, ConcurrentCallsAgree) {
  const FemGraph g = ChainMap();
  const ProjectionIndex index(g);
  const auto expected = index.Project(NormQuery());
  std::vector<std::thread> threads;
  std::vector<int> ok(8, 0);
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      const auto got = index.Project(NormQuery());
      bool same = got.anchor == expected.anchor && got.candidates.size() == expected.candidates.size();
      for (std::size_t i = 0; same && i < got.candidates.size(); ++i) {
        same = got.candidates[i].features == expected.candidates[i].features;
      }
      ok[t] = same;
    });
  }
  for (auto& th : threads) th.join();
  for (int v : ok) EXPECT_TRUE(v);
}

TEST(Projection, KeywordsUseVocabularyWhenGiven) {
  const FemGraph g = ChainMap();
  const ProjectionIndex with_vocab(g, 2000.0, {"euclidean norm", "vector"});
  const auto found = with_vocab.Keywords("the euclidean norm of a vector", NormQuery());
  EXPECT_EQ(found, (std::vector<std::string>{"euclidean norm", "vector"}));
}

}  // namespace
}  // namespace fem::projection
