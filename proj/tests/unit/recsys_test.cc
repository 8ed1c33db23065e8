#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "fem/common/errors.h"
#include "fem/map/map_io.h"
#include "fem/recsys/catalog.h"
#include "fem/recsys/het_graph.h"
#include "fem/recsys/judgments.h"
#include "fem/recsys/l2r.h"
#include "fem/recsys/metapath.h"
#include "fem/recsys/metrics.h"
#include "fem/recsys/orf.h"
#include "fem/recsys/recommend.h"
#include "fixture.h"
#include "oracles.h"

namespace fem::recsys {
namespace {

// ---------------------------------------------------------------- het graph

struct SmallWorld {
  std::vector<Paper> papers;
  std::vector<Oer> oers;
  map::FemGraph fem;
};

SmallWorld MakeSmallWorld() {
  SmallWorld w;
  w.papers = {
      {"p1", "Topic models", "latent dirichlet allocation for documents", {"latent dirichlet allocation", "topic model"},
       {"probabilistic models", "text mining"}, {"p2"}},
      {"p2", "Gradient methods", "stochastic gradient descent converges", {"gradient descent"}, {"optimization"}, {}},
  };
  w.oers = {
      {"o1", OerType::kVideo, "latent dirichlet allocation lecture", "topic model inference explained", {"o2"}},
      {"o2", OerType::kSlides, "gradient descent slides", "stochastic gradient descent convergence", {}},
      {"o3", OerType::kCode, "matrix factorization code", "numerical linear algebra", {}},
  };
  w.fem = map::FemGraph({testing::MakeVertex("f1", "p(z|\\theta)", "latent dirichlet allocation topic model prior"),
                         testing::MakeVertex("f2", "w-\\eta \\nabla L", "gradient descent update step")},
                        {{0, 1, 0.7}}, {});
  return w;
}

TEST(HetGraph, OutgoingWeightsAreNormalizedPerType) {
  const SmallWorld w = MakeSmallWorld();
  const HetGraph g = BuildHetGraph(w.papers, w.oers, w.fem);
  for (std::size_t t = 0; t < kEdgeTypeCount; ++t) {
    const auto& adj = g.Adjacency(static_cast<EdgeType>(t));
    for (VertexId v = 0; v < adj.vertex_count(); ++v) {
      const auto ws = adj.OutWeights(v);
      if (ws.empty()) continue;
      EXPECT_NEAR(std::accumulate(ws.begin(), ws.end(), 0.0), 1.0, 1e-9);
    }
  }
}

TEST(HetGraph, LanguageModelPrefersMatchingResource) {
  const SmallWorld w = MakeSmallWorld();
  const HetGraph g = BuildHetGraph(w.papers, w.oers, w.fem);
  const VertexId p1 = g.Require(VertexType::kPaper, "p1");
  const auto& adj = g.Adjacency(EdgeType::kPaperResource);
  const auto targets = adj.OutNeighbors(p1);
  const auto weights = adj.OutWeights(p1);
  const auto best = std::max_element(weights.begin(), weights.end()) - weights.begin();
  EXPECT_EQ(g.vertex(targets[static_cast<std::size_t>(best)]).key, "o1");
}

TEST(HetGraph, TopicsNeverCoassignedAreNotLinked) {
  const SmallWorld w = MakeSmallWorld();
  const HetGraph g = BuildHetGraph(w.papers, w.oers, w.fem);
  const VertexId text = g.Require(VertexType::kWeeklyTopic, "text mining");
  const VertexId opt = g.Require(VertexType::kWeeklyTopic, "optimization");
  const VertexId prob = g.Require(VertexType::kWeeklyTopic, "probabilistic models");
  const auto& ww = g.Adjacency(EdgeType::kTopicCooccurs);
  auto linked = [&](VertexId a, VertexId b) {
    const auto n = ww.OutNeighbors(a);
    return std::find(n.begin(), n.end(), b) != n.end();
  };
  EXPECT_TRUE(linked(text, prob));
  EXPECT_FALSE(linked(text, opt));
  EXPECT_FALSE(linked(opt, prob));
}

TEST(HetGraph, FormulaLinksFollowContextAndEvolution) {
  const SmallWorld w = MakeSmallWorld();
  const HetGraph g = BuildHetGraph(w.papers, w.oers, w.fem);
  const VertexId f1 = g.Require(VertexType::kFormula, "f1");
  const auto fk = g.Adjacency(EdgeType::kFormulaKeyword).OutNeighbors(f1);
  std::vector<std::string> keys;
  for (VertexId k : fk) keys.push_back(g.vertex(k).key);
  std::sort(keys.begin(), keys.end());
  EXPECT_EQ(keys, (std::vector<std::string>{"latent dirichlet allocation", "topic model"}));
  EXPECT_EQ(g.Adjacency(EdgeType::kFormulaEvolves).OutDegree(f1), 1u);
}

TEST(HetGraph, BadInputsThrow) {
  SmallWorld w = MakeSmallWorld();
  EXPECT_THROW(BuildHetGraph(w.papers, {}, w.fem), EmptyCatalogError);
  w.papers[0].cites = {"missing"};
  EXPECT_THROW(BuildHetGraph(w.papers, w.oers, w.fem), SchemaError);
  w = MakeSmallWorld();
  w.oers[0].related = {"missing"};
  EXPECT_THROW(BuildHetGraph(w.papers, w.oers, w.fem), SchemaError);
  EXPECT_THROW(HetGraph({{VertexType::kPaper, "p", ""}, {VertexType::kResource, "r", ""}},
                        {{EdgeType::kKeywordResource, 0, 1, 1.0}}),
               SchemaError);
}

TEST(HetGraph, IoRoundTrip) {
  const SmallWorld w = MakeSmallWorld();
  const HetGraph g = BuildHetGraph(w.papers, w.oers, w.fem);
  const auto dir = testing::MakeTempDir("het_io");
  WriteHetGraph(dir, g);
  const HetGraph back = ReadHetGraph(dir);
  ASSERT_EQ(back.vertex_count(), g.vertex_count());
  const auto a = g.Edges();
  const auto b = back.Edges();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].type, b[i].type);
    EXPECT_EQ(a[i].src, b[i].src);
    EXPECT_EQ(a[i].dst, b[i].dst);
    EXPECT_EQ(a[i].weight, b[i].weight);
  }
}

// ---------------------------------------------------------------- metapaths

// F0 -> {K0, K1} evenly; K0 -> {R0 .4, R1 .6}; K1 -> {R0 .6, R2 .4}.
HetGraph HandGraph() {
  std::vector<HetVertex> v{{VertexType::kResource, "r0", ""}, {VertexType::kResource, "r1", ""},
                           {VertexType::kResource, "r2", ""}, {VertexType::kResource, "r3", ""},
                           {VertexType::kKeyword, "k0", ""},  {VertexType::kKeyword, "k1", ""},
                           {VertexType::kFormula, "f0", ""}};
  std::vector<HetEdge> e{{EdgeType::kFormulaKeyword, 6, 4, 1.0}, {EdgeType::kFormulaKeyword, 6, 5, 1.0},
                         {EdgeType::kKeywordResource, 4, 0, 0.4}, {EdgeType::kKeywordResource, 4, 1, 0.6},
                         {EdgeType::kKeywordResource, 5, 0, 0.6}, {EdgeType::kKeywordResource, 5, 2, 0.4}};
  return HetGraph(std::move(v), std::move(e));
}

TEST(Metapath, SingleAndParallelTours) {
  const HetGraph g = HandGraph();
  const MetaPath fk_kr = ParseMetaPath("FK-KR");
  EXPECT_NEAR(MetapathScore(g, 6, 1, fk_kr), 0.5 * 0.6, 1e-15);
  EXPECT_NEAR(MetapathScore(g, 6, 2, fk_kr), 0.5 * 0.4, 1e-15);
  EXPECT_NEAR(MetapathScore(g, 6, 0, fk_kr), 0.5 * 0.4 + 0.5 * 0.6, 1e-15);
  EXPECT_EQ(MetapathScore(g, 6, 3, fk_kr), 0.0);
}

TEST(Metapath, MatchesTourEnumerationOnRandomGraphs) {
  testing::Rng rng(808);
  const std::vector<std::string> specs{"FR", "FK-KR", "FF-FR", "FK-KKco-KR", "FF-FK-KR", "FF-FF-FR",
                                      "PK-KP-PR", "WWco-WR", "FK-KP-PW-WR"};
  for (int trial = 0; trial < 20; ++trial) {
    const HetGraph g = testing::RandomHetGraph(rng, 8);
    for (const auto& spec : specs) {
      const MetaPath path = ParseMetaPath(spec);
      for (VertexId s = 0; s < g.vertex_count(); ++s) {
        if (g.vertex(s).type != SourceType(path.front())) continue;
        const auto reach = MetapathReach(g, s, path);
        for (VertexId t = 0; t < g.vertex_count(); ++t) {
          EXPECT_NEAR(reach[t], testing::EnumerateTours(g, s, t, path), 1e-9) << spec;
        }
      }
    }
  }
}

TEST(Metapath, ComposesLinearlyOverTheMiddleVertex) {
  testing::Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const HetGraph g = testing::RandomHetGraph(rng, 8);
    const MetaPath head = ParseMetaPath("FK");
    const MetaPath tail = ParseMetaPath("KR");
    const MetaPath full = ParseMetaPath("FK-KR");
    for (VertexId f : g.OfType(VertexType::kFormula)) {
      const auto first = MetapathReach(g, f, head);
      const auto whole = MetapathReach(g, f, full);
      std::vector<double> composed(g.vertex_count(), 0.0);
      for (VertexId k : g.OfType(VertexType::kKeyword)) {
        const auto second = MetapathReach(g, k, tail);
        for (VertexId r = 0; r < g.vertex_count(); ++r) composed[r] += first[k] * second[r];
      }
      for (VertexId r = 0; r < g.vertex_count(); ++r) EXPECT_NEAR(whole[r], composed[r], 1e-12);
    }
  }
}

TEST(Metapath, ParsingAndValidation) {
  EXPECT_EQ(MetaPathName(ParseMetaPath("FK-KKco-KR")), "FK-KKco-KR");
  EXPECT_THROW(ParseMetaPath("FK-PR"), SchemaError);
  EXPECT_THROW(ParseMetaPath("XX"), SchemaError);
  const HetGraph g = HandGraph();
  EXPECT_THROW(MetapathReach(g, 0, ParseMetaPath("FR")), SchemaError);
  EXPECT_THROW(MetapathReach(g, 99, ParseMetaPath("FR")), UnknownVertexError);
  EXPECT_THROW(MetapathReach(g, 6, ParseMetaPath("FF-FF-FF-FF-FR")), SchemaError);
}

// ---------------------------------------------------------------- ORF

TEST(Orf, DefaultSetHasFourteenNamedFeatures) {
  const OrfConfig c = OrfConfig::Default();
  ASSERT_EQ(c.size(), 14u);
  const auto names = c.Names();
  EXPECT_EQ(names.front(), "FR");
  EXPECT_EQ(names.back(), "type:wiki");
  EXPECT_EQ(OrfConfig::FromNames(names).Names(), names);
  EXPECT_THROW(OrfConfig::FromNames({"FR", "bogus"}), SchemaError);
}

TEST(Orf, GraphFeaturesFollowMetapathsAndZeroWhenUnreachable) {
  const HetGraph g = HandGraph();
  const std::vector<Oer> oers{{"r0", OerType::kVideo, "a", "", {}},
                              {"r1", OerType::kSlides, "b", "", {}},
                              {"r2", OerType::kCode, "c", "", {}},
                              {"r3", OerType::kWiki, "d", "", {}}};
  const map::FemGraph fem({testing::MakeVertex("f0", "x+y", "")}, {}, {});
  const OrfExtractor orf(g, oers, fem);
  const auto r2 = orf.Features("f0", "r2");
  EXPECT_NEAR(r2[1], 0.2, 1e-15);  // FK-KR
  EXPECT_EQ(r2[12], 1.0);          // type:code
  const auto r3 = orf.Features("f0", "r3");
  for (std::size_t k = 0; k < 6; ++k) EXPECT_EQ(r3[k], 0.0);
  EXPECT_EQ(r3[13], 1.0);
  EXPECT_THROW(orf.Features("f0", "nope"), UnknownVertexError);
  EXPECT_THROW(orf.Features("nope", "r0"), UnknownFormulaError);
}

TEST(Orf, CatalogMustMatchGraph) {
  const HetGraph g = HandGraph();
  const map::FemGraph fem({testing::MakeVertex("f0", "x+y", "")}, {}, {});
  EXPECT_THROW(OrfExtractor(g, {{"r0", OerType::kVideo, "a", "", {}}}, fem), SchemaError);
  OrfConfig bad;
  bad.templates = {ParseMetaPath("KR")};
  const std::vector<Oer> oers{{"r0", OerType::kVideo, "", "", {}}, {"r1", OerType::kVideo, "", "", {}},
                              {"r2", OerType::kVideo, "", "", {}}, {"r3", OerType::kVideo, "", "", {}}};
  EXPECT_THROW(OrfExtractor(g, oers, fem, bad), SchemaError);
}

// ---------------------------------------------------------------- metrics

TEST(Metrics, HandCase) {
  const std::vector<Rating> ranked{Rating::kBad, Rating::kGood, Rating::kOK};
  const RankingMetrics m = EvaluateRanking(ranked);
  EXPECT_NEAR(m.ndcg3, 0.6697, 1e-4);
  EXPECT_DOUBLE_EQ(m.p3, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.mrr, 0.5);
}

TEST(Metrics, UnratedCountsAsBad) {
  const std::vector<std::optional<Rating>> ranked{std::nullopt, Rating::kGood};
  EXPECT_DOUBLE_EQ(ReciprocalRank(ranked), 0.5);
  const std::vector<std::optional<Rating>> none{std::nullopt, std::nullopt};
  EXPECT_EQ(NdcgAt(none, 3), 0.0);
}

TEST(Metrics, MatchDirectDefinitionsOnRandomLists) {
  testing::Rng rng(1000);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 12;
    std::vector<Rating> ranked(n);
    for (auto& r : ranked) r = static_cast<Rating>(rng() % 3);
    const RankingMetrics got = EvaluateRanking(ranked);
    const testing::DirectMetrics want = testing::ComputeDirectMetrics(ranked);
    EXPECT_EQ(got.ndcg3, want.ndcg3);
    EXPECT_EQ(got.ndcg5, want.ndcg5);
    EXPECT_EQ(got.ndcg_all, want.ndcg_all);
    EXPECT_EQ(got.p3, want.p3);
    EXPECT_EQ(got.p5, want.p5);
    EXPECT_EQ(got.map, want.ap);
    EXPECT_EQ(got.mrr, want.rr);
  }
}

TEST(Metrics, RatingNames) {
  EXPECT_EQ(ParseRating("good"), Rating::kGood);
  EXPECT_EQ(RatingName(Rating::kOK), "OK");
  EXPECT_THROW(ParseRating("great"), SchemaError);
}

// ---------------------------------------------------------------- judgments

Judgment Judged(std::string request, std::string oer, Rating rating, std::optional<int> distance = {}) {
  Judgment j;
  j.request_id = std::move(request);
  j.oer_id = std::move(oer);
  j.rating = rating;
  j.distance = distance;
  return j;
}

TEST(Judgments, AverageDistance) {
  const std::vector<Judgment> js{Judged("q", "a", Rating::kGood, 0), Judged("q", "b", Rating::kGood, 1),
                                 Judged("q", "c", Rating::kGood, 2), Judged("q", "d", Rating::kOK)};
  EXPECT_DOUBLE_EQ(AverageJudgmentDistance(js, Rating::kGood), 1.0);
  EXPECT_THROW(AverageJudgmentDistance(js, Rating::kBad), NoJudgmentsOfTypeError);
  EXPECT_THROW(AverageJudgmentDistance(js, Rating::kOK), NoJudgmentsOfTypeError);
}

TEST(Judgments, JoinKeepsLatestAndFillsHosting) {
  std::vector<Judgment> js{Judged("q1", "a", Rating::kBad), Judged("q1", "a", Rating::kGood),
                           Judged("q1", "zz", Rating::kGood), Judged("q2", "a", Rating::kOK)};
  const std::vector<FeatureRecord> fs{{"q1", "b", "f9", 2, {0.5}},
                                      {"q1", "a", "f7", 1, {1.0}},
                                      {"q2", "a", "f7", 3, {0.25}}};
  std::size_t skipped = 0;
  const auto requests = JoinJudgments(js, fs, &skipped);
  EXPECT_EQ(skipped, 1u);
  ASSERT_EQ(requests.size(), 2u);
  EXPECT_EQ(requests[0].request_id, "q1");
  ASSERT_EQ(requests[0].items.size(), 1u);  // only judged resources are ranked
  EXPECT_EQ(requests[0].items[0].oer_id, "a");
  EXPECT_EQ(requests[0].items[0].rating, Rating::kGood);
  EXPECT_EQ(requests[0].items[0].distance, 1);
  EXPECT_EQ(js[1].hosting_formula, "f7");
  EXPECT_EQ(js[1].distance, 1);
  EXPECT_TRUE(requests[1].HasRelevant());
}

TEST(Judgments, JsonLinesRoundTrip) {
  const auto dir = testing::MakeTempDir("judgments");
  Judgment j = Judged("q1", "o1", Rating::kOK, 2);
  j.hosting_formula = "f1";
  j.timestamp = "2024-05-01T00:00:00Z";
  WriteJudgments(dir / "j.jsonl", {j});
  const auto back = LoadJudgments(dir / "j.jsonl");
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].rating, Rating::kOK);
  EXPECT_EQ(back[0].distance, 2);
  EXPECT_EQ(back[0].hosting_formula, "f1");

  const FeatureRecord r{"q1", "o1", "f1", 2, {0.1, 1.0 / 3.0}};
  WriteFeatureStore(dir / "f.jsonl", {r});
  const auto store = LoadFeatureStore(dir / "f.jsonl");
  ASSERT_EQ(store.size(), 1u);
  EXPECT_EQ(store[0].features, r.features);
}

// ---------------------------------------------------------------- L2R

double PlantedMrr(const std::vector<RankingRequest>& requests, const std::vector<double>& planted) {
  return MeanReciprocalRank(requests, planted);
}

TEST(L2R, RecoversPlantedRankingOnHeldOutRequests) {
  testing::Rng rng(2024);
  const std::vector<double> planted{1.5, -0.7, 0.3, 0.9};
  const auto train = testing::PlantedRequests(rng, planted, 150, 10);
  const auto test = testing::PlantedRequests(rng, planted, 150, 10);
  TrainOptions options;
  options.folds = 5;
  options.restarts = 3;
  const TrainReport report = TrainL2R(train, 2, {"a", "b"}, options);
  EXPECT_TRUE(report.model.trained);
  EXPECT_GE(MeanReciprocalRank(test, report.model.weights), 0.95 * PlantedMrr(test, planted));
  EXPECT_EQ(report.folds.size(), 5u);
}

TEST(L2R, CorrelatedFeatureDominates) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<RankingRequest> requests;
  for (int r = 0; r < 60; ++r) {
    RankingRequest req;
    req.request_id = "r" + std::to_string(100 + r);
    const int good = static_cast<int>(rng() % 8);
    for (int i = 0; i < 8; ++i) {
      RankingItem item;
      item.oer_id = "o" + std::to_string(i);
      item.features = {(i == good ? 1.0 : 0.0) + 0.1 * u(rng), u(rng), u(rng), u(rng)};
      item.rating = i == good ? Rating::kGood : Rating::kBad;
      req.items.push_back(item);
    }
    requests.push_back(std::move(req));
  }
  const AscentResult result = CoordinateAscent(requests, std::vector<double>(4, 0.0));
  EXPECT_DOUBLE_EQ(result.objective, 1.0);
  for (std::size_t j = 1; j < 4; ++j) EXPECT_GT(result.weights[0], std::abs(result.weights[j]));
}

TEST(L2R, ObjectiveNeverDecreasesAcrossAcceptedUpdates) {
  testing::Rng rng(31);
  const auto requests = testing::PlantedRequests(rng, {0.4, -1.0, 0.8, 0.2, -0.3, 1.1}, 80, 12);
  const AscentResult result = CoordinateAscent(requests, std::vector<double>(6, 1.0));
  ASSERT_GE(result.trace.size(), 2u);
  for (std::size_t i = 1; i < result.trace.size(); ++i) {
    EXPECT_GT(result.trace[i], result.trace[i - 1]);
  }
  EXPECT_DOUBLE_EQ(result.trace.back(), result.objective);
  EXPECT_DOUBLE_EQ(MeanReciprocalRank(requests, result.weights), result.objective);
}

TEST(L2R, TrainingIsDeterministic) {
  testing::Rng rng(8);
  const auto requests = testing::PlantedRequests(rng, {1.0, -1.0, 0.5, 0.25}, 40, 6);
  TrainOptions options;
  options.folds = 4;
  options.restarts = 2;
  const auto a = TrainL2R(requests, 2, {"x", "y"}, options);
  const auto b = TrainL2R(requests, 2, {"x", "y"}, options);
  EXPECT_EQ(a.model.weights, b.model.weights);
  EXPECT_EQ(a.cv.mrr, b.cv.mrr);
}

TEST(L2R, TooFewRelevantRequestsThrow) {
  testing::Rng rng(1);
  auto requests = testing::PlantedRequests(rng, {1.0, 1.0}, 5, 4);
  for (auto& r : requests) {
    for (auto& i : r.items) i.rating = Rating::kBad;
  }
  requests[0].items[0].rating = Rating::kOK;
  try {
    TrainL2R(requests, 1, {"a", "b"});
    FAIL() << "expected InsufficientDataError";
  } catch (const InsufficientDataError& e) {
    EXPECT_EQ(e.required(), kMinRelevantRequests);
  }
}

TEST(L2R, RankItemsBreaksTiesById) {
  RankingRequest req;
  req.items = {{"o1", {1.0}, Rating::kBad, 0}, {"o2", {1.0}, Rating::kGood, 0}, {"o3", {2.0}, Rating::kBad, 0}};
  const std::vector<double> w{1.0};
  EXPECT_EQ(RankItems(req, w), (std::vector<std::size_t>{2, 0, 1}));
  EXPECT_DOUBLE_EQ(MeanReciprocalRank({req}, w), 1.0 / 3.0);
}

TEST(L2R, ModelRoundTrip) {
  L2RModel m = L2RModel::Uniform(2, {"FR", "type:code"});
  m.weights = {0.1, -2.0, 1.0 / 3.0, 1e-17};
  m.trained = true;
  m.version = 4;
  m.folds = 10;
  m.restarts = 5;
  m.seed = 99;
  const auto dir = testing::MakeTempDir("model");
  SaveModel(dir / "m.json", m);
  const L2RModel back = LoadModel(dir / "m.json");
  EXPECT_EQ(back.weights, m.weights);
  EXPECT_EQ(back.ranking_features, m.ranking_features);
  EXPECT_EQ(back.version, 4);
  EXPECT_TRUE(back.trained);
  EXPECT_EQ(back.ProjectionWeights(), (std::vector<double>{0.1 - 2.0, 1.0 / 3.0 + 1e-17}));
  EXPECT_THROW(ModelFromJson(jsonl::Json{{"format", "other"}}), ArtifactError);
  EXPECT_THROW(LoadModel(dir / "missing.json"), ArtifactError);
}

// ---------------------------------------------------------------- fusion

TEST(FuseScores, AllOnesGiveProductOfDimensions) {
  const kernels::JointShape shape{1, 1, 12, 14};
  const std::vector<double> fpf(12, 1.0), orf(14, 1.0), w(12 * 14, 1.0);
  EXPECT_EQ(FuseScores(shape, fpf, orf, w), std::vector<double>{168.0});
}

TEST(FuseScores, MatchesTripleSumAndIsBilinear) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const kernels::JointShape shape{3, 4, 2, 3};
  std::vector<double> fpf(3 * 2), orf(3 * 4 * 3), w(2 * 3);
  for (auto* v : {&fpf, &orf, &w}) {
    for (auto& x : *v) x = u(rng);
  }
  const auto got = FuseScores(shape, fpf, orf, w);
  for (std::size_t r = 0; r < 4; ++r) {
    double want = 0.0;
    for (std::size_t f = 0; f < 3; ++f) {
      for (std::size_t m = 0; m < 2; ++m) {
        for (std::size_t k = 0; k < 3; ++k) want += w[m * 3 + k] * fpf[f * 2 + m] * orf[(f * 4 + r) * 3 + k];
      }
    }
    EXPECT_NEAR(got[r], want, 1e-12);
  }
  auto scaled = fpf;
  for (auto& x : scaled) x *= 2.5;
  const auto twice = FuseScores(shape, scaled, orf, w);
  for (std::size_t r = 0; r < 4; ++r) EXPECT_NEAR(twice[r], 2.5 * got[r], 1e-12);
}

// ---------------------------------------------------------------- recommender

struct LoadedFixture {
  map::FemGraph fem;
  HetGraph graph;
  std::vector<Oer> oers;
};

const LoadedFixture& Loaded() {
  static const LoadedFixture loaded = [] {
    const auto& f = testing::Fixture();
    return LoadedFixture{map::ReadMap(f.map), ReadHetGraph(f.graph), LoadOers(f.oers)};
  }();
  return loaded;
}

projection::QueryFormula FixtureQuery() {
  const auto& fem = Loaded().fem;
  projection::QueryFormula q;
  q.latex = fem.vertex(0).latex;
  q.context = fem.vertex(0).context;
  return q;
}

TEST(Recommender, ScoresEqualModelTimesJointFeatures) {
  const auto& d = Loaded();
  const Recommender rec(d.fem, d.graph, d.oers);
  L2RModel model = L2RModel::Uniform(projection::kFeatureCount, OrfConfig::Default().Names());
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& w : model.weights) w = u(rng);
  const Recommendation r = rec.Recommend(FixtureQuery(), model, 0);
  ASSERT_EQ(r.results.size(), d.oers.size());
  double edge_mass = 0.0;
  for (const auto& [v, w] : r.attachment.projection_edges) edge_mass += w;
  EXPECT_NEAR(edge_mass, 1.0, 1e-9);
  for (std::size_t i = 0; i < r.results.size(); ++i) {
    const auto& res = r.results[i];
    EXPECT_NEAR(res.score, model.Score(res.joint), 1e-9 * (1.0 + std::abs(res.score)));
    if (i > 0) {
      const auto& prev = r.results[i - 1];
      EXPECT_TRUE(prev.score > res.score || (prev.score == res.score && prev.oer_id < res.oer_id));
    }
    const auto hosting = d.fem.Require(res.hosting_formula);
    const auto it = std::find_if(r.projection.candidates.begin(), r.projection.candidates.end(),
                                 [&](const auto& c) { return c.candidate == hosting; });
    ASSERT_NE(it, r.projection.candidates.end());
    EXPECT_EQ(it->distance, res.distance);
  }
}

TEST(Recommender, ZeroWeightsFallBackToIdOrder) {
  const auto& d = Loaded();
  const Recommender rec(d.fem, d.graph, d.oers);
  L2RModel model = L2RModel::Uniform(projection::kFeatureCount, OrfConfig::Default().Names());
  std::fill(model.weights.begin(), model.weights.end(), 0.0);
  const Recommendation r = rec.Recommend(FixtureQuery(), model, 5);
  ASSERT_EQ(r.results.size(), 5u);
  std::vector<std::string> ids;
  for (const auto& o : d.oers) ids.push_back(o.id);
  std::sort(ids.begin(), ids.end());
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(r.results[i].oer_id, ids[i]);
}

TEST(Recommender, RejectsMismatchedModels) {
  const auto& d = Loaded();
  const Recommender rec(d.fem, d.graph, d.oers);
  EXPECT_THROW(rec.Recommend(FixtureQuery(), L2RModel::Uniform(12, {"FR"})), SchemaError);
  auto names = OrfConfig::Default().Names();
  std::swap(names[0], names[1]);
  EXPECT_THROW(rec.Recommend(FixtureQuery(), L2RModel::Uniform(12, names)), SchemaError);
  projection::QueryFormula bad = FixtureQuery();
  bad.latex = "\\frac{1}";
  EXPECT_THROW(rec.Recommend(bad, L2RModel::Uniform(12, OrfConfig::Default().Names())), NoParseError);
}

}  // namespace
}  // namespace fem::recsys
