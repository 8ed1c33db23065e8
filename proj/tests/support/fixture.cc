#include "fixture.h"

#include <atomic>
#include <chrono>
#include <mutex>

#include "fem/common/jsonl.h"
#include "fem/formula/mathml_parser.h"
#include "fem/formula/terms.h"
#include "fem/ingest/ingest_io.h"
#include "fem/map/map_io.h"
#include "fem/recsys/het_graph.h"
#include "fem/recsys/judgments.h"
#include "fem/recsys/recommend.h"
#include "fem/service/api.h"

namespace fem::testing {
namespace fs = std::filesystem;

fs::path FixtureDir() { return FEM_FIXTURE_DIR; }

fs::path MakeTempDir(const std::string& prefix) {
  static std::atomic<int> counter{0};
  const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  fs::path dir = fs::temp_directory_path() /
                 (prefix + "-" + std::to_string(stamp) + "-" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const BuiltFixture& Fixture() {
  static BuiltFixture built;
  static std::once_flag once;
  std::call_once(once, [] {
    BuiltFixture b;
    b.root = MakeTempDir("fem-fixture");
    b.ingest = b.root / "ingest";
    b.map = b.root / "map";
    b.graph = b.root / "graph";
    b.features = b.root / "features.jsonl";
    b.oers = FixtureDir() / "oers.jsonl";
    b.papers = FixtureDir() / "papers.jsonl";
    b.requests = FixtureDir() / "requests.jsonl";
    b.judgments = FixtureDir() / "judgments.jsonl";

    const auto corpus = ingest::LoadCorpus(FixtureDir() / "wiki.jsonl");
    const auto dated = ingest::LoadPaperCorpus(FixtureDir() / "paper_corpus.jsonl");
    ingest::IngestSummary summary;
    const auto output = ingest::RunIngest(corpus, &dated, {}, &summary);
    ingest::WriteIngestOutput(b.ingest, output, summary);
    const auto fem = map::BuildEvolutionMap(output, {});
    map::WriteMap(b.map, fem);
    const auto oers = recsys::LoadOers(b.oers);
    const auto graph = recsys::BuildHetGraph(recsys::LoadPapers(b.papers), oers, fem);
    recsys::WriteHetGraph(b.graph, graph);

    const recsys::Recommender rec(fem, graph, oers, recsys::OrfConfig::Default(), fem.params().mu,
                                  recsys::KeywordVocabulary(graph));
    const auto model = recsys::L2RModel::Uniform(12, recsys::OrfConfig::Default().Names());
    std::vector<recsys::FeatureRecord> records;
    jsonl::ForEachRecord(b.requests, [&](const jsonl::Json& r, std::size_t) {
      const auto out = rec.Recommend(service::QueryFromJson(r.at("query")), model, 0);
      for (const auto& item : out.results) {
        records.push_back({r.at("request_id").get<std::string>(), item.oer_id, item.hosting_formula, item.distance,
                           item.joint});
      }
    });
    recsys::WriteFeatureStore(b.features, records);
    built = b;
  });
  return built;
}

map::FormulaVertex MakeVertex(const std::string& id, const std::string& latex, const std::string& context,
                              double generality) {
  map::FormulaVertex v;
  v.id = id;
  v.latex = latex;
  v.context = context;
  v.terms = formula::ExtractTerms(formula::ParseFormula(latex));
  v.complexity = formula::Complexity(v.terms);
  v.generality = generality;
  return v;
}

}  // namespace fem::testing
