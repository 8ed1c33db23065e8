#include <fstream>
#include <iomanip>
#include <iostream>

#include "cli/commands.h"
#include "cli/common.h"
#include "fem/common/errors.h"
#include "fem/map/map_io.h"
#include "fem/recsys/het_graph.h"
#include "fem/recsys/judgments.h"
#include "fem/recsys/l2r.h"
#include "fem/recsys/recommend.h"
#include "fem/service/api.h"

namespace fem::cli {
namespace {

void PrintMetricsRow(std::ostream& out, const recsys::RankingMetrics& m) {
  out << "NDCG@3\tNDCG@5\tNDCG@all\tP@3\tP@5\tMAP\tMRR\n" << std::fixed << std::setprecision(4) << m.ndcg3 << '\t'
      << m.ndcg5 << '\t' << m.ndcg_all << '\t' << m.p3 << '\t' << m.p5 << '\t' << m.map << '\t' << m.mrr << '\n'
      << std::defaultfloat;
}

void PrintAjd(std::ostream& out, const std::vector<recsys::Judgment>& judgments) {
  for (auto r : {recsys::Rating::kGood, recsys::Rating::kOK, recsys::Rating::kBad}) {
    out << "AJD_" << recsys::RatingName(r) << '\t';
    try {
      out << std::fixed << std::setprecision(4) << recsys::AverageJudgmentDistance(judgments, r)
          << std::defaultfloat << '\n';
    } catch (const NoJudgmentsOfTypeError&) {
      out << "n/a\n";
    }
  }
}

recsys::L2RModel ModelOrUniform(const std::string& path) {
  if (!path.empty()) return recsys::LoadModel(path);
  return recsys::L2RModel::Uniform(projection::kFeatureCount, recsys::OrfConfig::Default().Names());
}

}  // namespace

int RecMain(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Resource recommendation: graph, features, training, evaluation"};
  app.require_subcommand(1);
  bool quiet = false;
  AddVerbosity(app, quiet);

  std::string map_dir, graph_dir, oers_path, papers_path, out_path, model_path, judgments_path, features_path,
      requests_path;
  recsys::HetGraphOptions graph_options;

  auto* build = app.add_subcommand("build-graph", "Build the heterogeneous ranking graph");
  build->add_option("--map", map_dir)->required()->check(CLI::ExistingDirectory);
  build->add_option("--papers", papers_path)->required()->check(CLI::ExistingFile);
  build->add_option("--oers", oers_path)->required()->check(CLI::ExistingFile);
  build->add_option("--out", out_path)->required();
  build->add_option("--mu", graph_options.mu);
  build->add_option("--top-k", graph_options.lm_top_k, "Resources kept per text source");

  auto* features = app.add_subcommand("features", "Compute joint features for logged queries");
  features->add_option("--map", map_dir)->required()->check(CLI::ExistingDirectory);
  features->add_option("--graph", graph_dir)->required()->check(CLI::ExistingDirectory);
  features->add_option("--oers", oers_path)->required()->check(CLI::ExistingFile);
  features->add_option("--requests", requests_path, "JSON lines {request_id, query}")
      ->required()
      ->check(CLI::ExistingFile);
  features->add_option("--model", model_path)->check(CLI::ExistingFile);
  features->add_option("--out", out_path, "Feature store to write")->required();

  recsys::TrainOptions train_options;
  auto* train = app.add_subcommand("train", "Fit ranking weights by coordinate ascent on MRR");
  train->add_option("--judgments", judgments_path)->required()->check(CLI::ExistingFile);
  train->add_option("--features", features_path)->required()->check(CLI::ExistingFile);
  train->add_option("--out", out_path, "Model file to write")->required();
  train->add_option("--folds", train_options.folds);
  train->add_option("--restarts", train_options.restarts);
  train->add_option("--seed", train_options.seed);

  auto* eval = app.add_subcommand("eval", "Evaluate a model on judged requests");
  eval->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
  eval->add_option("--judgments", judgments_path)->required()->check(CLI::ExistingFile);
  eval->add_option("--features", features_path)->required()->check(CLI::ExistingFile);

  QueryArgs qargs;
  std::size_t top_n = 10;
  auto* recommend = app.add_subcommand("recommend", "Rank resources for a query formula");
  recommend->add_option("--map", map_dir)->required()->check(CLI::ExistingDirectory);
  recommend->add_option("--graph", graph_dir)->required()->check(CLI::ExistingDirectory);
  recommend->add_option("--oers", oers_path)->required()->check(CLI::ExistingFile);
  recommend->add_option("--model", model_path)->check(CLI::ExistingFile);
  recommend->add_option("--top", top_n, "Number of resources (0 = all)");
  qargs.Register(*recommend);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  return Report(err, [&] {
    if (*build) {
      const auto fem = map::ReadMap(map_dir);
      const auto graph = recsys::BuildHetGraph(recsys::LoadPapers(papers_path), recsys::LoadOers(oers_path), fem,
                                               graph_options);
      recsys::WriteHetGraph(out_path, graph);
      out << "vertices " << graph.vertex_count() << ", edges " << graph.Edges().size() << '\n';
    } else if (*features) {
      const auto fem = map::ReadMap(map_dir);
      const auto graph = recsys::ReadHetGraph(graph_dir);
      const auto oers = recsys::LoadOers(oers_path);
      const recsys::Recommender recommender(fem, graph, oers, recsys::OrfConfig::Default(), fem.params().mu,
                                            recsys::KeywordVocabulary(graph));
      const auto model = ModelOrUniform(model_path);
      std::vector<recsys::FeatureRecord> records;
      jsonl::ForEachRecord(requests_path, [&](const jsonl::Json& r, std::size_t line) {
        const std::string id = jsonl::RequireId(r, "request_id", line);
        const auto rec = recommender.Recommend(service::QueryFromJson(r.at("query")), model, 0);
        for (const auto& item : rec.results) {
          records.push_back({id, item.oer_id, item.hosting_formula, item.distance, item.joint});
        }
      });
      recsys::WriteFeatureStore(out_path, records);
      out << "feature records " << records.size() << '\n';
    } else if (*train) {
      auto judgments = recsys::LoadJudgments(judgments_path);
      std::size_t skipped = 0;
      const auto requests = recsys::JoinJudgments(judgments, recsys::LoadFeatureStore(features_path), &skipped);
      if (skipped > 0) out << "judgments without features: " << skipped << '\n';
      const auto report =
          recsys::TrainL2R(requests, projection::kFeatureCount, recsys::OrfConfig::Default().Names(), train_options);
      recsys::SaveModel(out_path, report.model);
      out << "requests " << requests.size() << ", folds " << report.folds.size() << ", train MRR "
          << (report.trace.empty() ? 0.0 : report.trace.back()) << '\n';
      out << "cross-validated:\n";
      PrintMetricsRow(out, report.cv);
    } else if (*eval) {
      const auto model = recsys::LoadModel(model_path);
      auto judgments = recsys::LoadJudgments(judgments_path);
      const auto requests = recsys::JoinJudgments(judgments, recsys::LoadFeatureStore(features_path));
      if (model.weights.size() != model.dimension()) throw ArtifactError("model has the wrong weight count");
      PrintMetricsRow(out, recsys::EvaluateWeights(requests, model.weights));
      PrintAjd(out, judgments);
    } else if (*recommend) {
      const auto fem = map::ReadMap(map_dir);
      const auto graph = recsys::ReadHetGraph(graph_dir);
      const auto oers = recsys::LoadOers(oers_path);
      const recsys::Recommender recommender(fem, graph, oers, recsys::OrfConfig::Default(), fem.params().mu,
                                            recsys::KeywordVocabulary(graph));
      const auto rec = recommender.Recommend(qargs.ToQuery(), ModelOrUniform(model_path), top_n);
      out << service::ResultsToJson(recommender.orf(), rec.results).dump(2) << '\n';
    }
  });
}

}  // namespace fem::cli
