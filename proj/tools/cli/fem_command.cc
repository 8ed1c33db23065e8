#include <iomanip>
#include <iostream>

#include "cli/commands.h"
#include "cli/common.h"
#include "fem/common/log.h"
#include "fem/formula/latex_parser.h"
#include "fem/formula/mathml_parser.h"
#include "fem/formula/terms.h"
#include "fem/ingest/birth_times.h"
#include "fem/ingest/ingest_io.h"
#include "fem/map/map_io.h"
#include "fem/recsys/het_graph.h"
#include "fem/recsys/l2r.h"
#include "fem/service/api.h"

namespace fem::cli {

int FemMain(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Formula evolution map: ingest, build, query"};
  app.require_subcommand(1);
  bool quiet = false;
  AddVerbosity(app, quiet);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Extract and filter formulae from a page dump");
  std::string wiki, papers, ingest_out;
  std::size_t context_words = 250, context_chars = 0;
  ingest::FilterRule rule;
  ingest->add_option("--corpus,--wiki", wiki, "Pages as JSON lines")->required()->check(CLI::ExistingFile);
  ingest->add_option("--papers", papers, "Dated paper corpus for birth times")->check(CLI::ExistingFile);
  ingest->add_option("--out", ingest_out, "Output directory")->required();
  ingest->add_option("--context-words", context_words, "Context window in words");
  ingest->add_option("--context-chars", context_chars, "Context window in characters (overrides words)");
  ingest->add_option("--min-variables", rule.min_variables);
  ingest->add_option("--min-operators", rule.min_operators);

  // build
  auto* build = app.add_subcommand("build", "Build the evolution map from ingest output");
  std::string build_in, build_out;
  map::MapParams params;
  build->add_option("--in", build_in, "Ingest output directory")->required()->check(CLI::ExistingDirectory);
  build->add_option("--out", build_out, "Map output directory")->required();
  build->add_option("--seed", params.seed);
  build->add_option("--dim", params.dim);
  build->add_option("--walks", params.walks_per_vertex, "Walks per vertex");
  build->add_option("--walk-len,--walk-length", params.walk_length);
  build->add_option("--window", params.window);
  build->add_option("--negatives", params.negatives);
  build->add_option("--epochs", params.epochs);
  build->add_option("--learning-rate", params.learning_rate);
  build->add_option("--mu", params.mu, "Dirichlet smoothing mass");
  build->add_option("--damping", params.damping);
  build->add_option("--prune", params.prune_threshold, "Minimum evolution probability kept");
  build->add_option("--theta-t,--theta-context", params.theta.context);
  build->add_option("--theta-l,--theta-layout", params.theta.layout);
  build->add_option("--theta-g,--theta-generality", params.theta.generality);

  // query
  auto* query = app.add_subcommand("query", "Project a query formula onto the map");
  std::string query_map, query_model, query_graph;
  std::size_t top_n = 10;
  bool as_json = false;
  QueryArgs qargs;
  query->add_option("--map", query_map)->required()->check(CLI::ExistingDirectory);
  query->add_option("--graph", query_graph, "Ranking graph whose keyword and topic phrases are matched in query text")
      ->check(CLI::ExistingDirectory);
  query->add_option("--model", query_model, "Trained model; its row sums weight the ranking")
      ->check(CLI::ExistingFile);
  query->add_option("--top", top_n, "Number of candidates (0 = all)");
  query->add_flag("--json", as_json, "Print the service response shape");
  qargs.Register(*query);

  // parse-formula
  auto* parse = app.add_subcommand("parse-formula", "Print the semantic tree and terms of a formula");
  std::string formula_text;
  parse->add_option("formula", formula_text)->required();

  // subgraph
  auto* sub = app.add_subcommand("subgraph", "Print the evolution neighbourhood of a formula as JSON");
  std::string sub_map, sub_formula;
  int depth = map::kDefaultSubgraphDepth;
  sub->add_option("--map", sub_map)->required()->check(CLI::ExistingDirectory);
  sub->add_option("--formula", sub_formula)->required();
  sub->add_option("--depth", depth)->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  return Report(err, [&] {
    if (*ingest) {
      ingest::IngestOptions options;
      if (context_chars > 0) {
        options.context_unit = ingest::ContextUnit::kCharacters;
        options.context_window = context_chars;
      } else {
        options.context_window = context_words;
      }
      const auto corpus = ingest::LoadCorpus(wiki, options);
      std::vector<ingest::DatedPaper> dated;
      if (!papers.empty()) dated = ingest::LoadPaperCorpus(papers);
      ingest::IngestSummary summary;
      const auto output = ingest::RunIngest(corpus, papers.empty() ? nullptr : &dated, rule, &summary);
      ingest::WriteIngestOutput(ingest_out, output, summary);
      out << "pages " << summary.pages << ", spans " << summary.math_spans << ", skipped " << summary.skipped_spans
          << ", parsed " << summary.formulas_parsed << ", kept " << summary.formulas_kept << ", dated "
          << summary.formulas_dated << '\n';
    } else if (*build) {
      const auto input = ingest::ReadIngestOutput(build_in);
      map::BuildReport report;
      const auto graph = map::BuildEvolutionMap(input, params, &report);
      map::WriteMap(build_out, graph);
      out << "formulae " << graph.size() << ", candidate pairs " << report.candidate_pairs << ", edges "
          << report.edges_before_prune << " -> " << graph.edges().size() << " after pruning\n";
    } else if (*query) {
      const auto graph = map::ReadMap(query_map);
      std::vector<double> weights;
      if (!query_model.empty()) {
        const auto model = recsys::LoadModel(query_model);
        if (model.trained) weights = model.ProjectionWeights();
      }
      std::vector<std::string> vocabulary;
      if (!query_graph.empty()) vocabulary = recsys::KeywordVocabulary(recsys::ReadHetGraph(query_graph));
      const projection::ProjectionIndex index(graph, graph.params().mu, std::move(vocabulary));
      const auto result = index.Project(qargs.ToQuery(), top_n, weights);
      if (as_json) {
        out << service::ProjectionToJson(graph, result).dump(2) << '\n';
        return;
      }
      out << "# anchor " << graph.vertex(result.anchor).id << '\n';
      out << std::setprecision(17);
      for (const auto& c : result.candidates) {
        out << graph.vertex(c.candidate).id << '\t' << c.distance;
        for (double f : c.features) out << '\t' << f;
        out << '\n';
      }
    } else if (*parse) {
      const auto tree = formula::ParseFormula(formula_text);
      out << formula::DebugString(tree);
      const auto terms = formula::ExtractTerms(tree);
      out << "# complexity " << formula::Complexity(terms) << ", variables " << formula::CountVariables(tree.root)
          << ", operators " << formula::CountOperators(tree.root) << '\n';
      for (const auto& t : terms.terms) {
        out << formula::TermKindName(t.kind) << '\t' << t.level << '\t' << t.serialization << '\n';
      }
    } else if (*sub) {
      const auto graph = map::ReadMap(sub_map);
      out << service::SubgraphToJson(graph, map::ExtractSubgraph(graph, sub_formula, depth)).dump(2) << '\n';
    }
  });
}

}  // namespace fem::cli
