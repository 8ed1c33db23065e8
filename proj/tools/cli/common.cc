#include "cli/common.h"

#include "fem/common/log.h"

namespace fem::cli {

void QueryArgs::Register(CLI::App& app) {
  app.add_option("--latex", latex, "Query formula (LaTeX or MathML)")->required();
  app.add_option("--context", context, "Text surrounding the formula");
  app.add_option("--question", question, "Optional question text");
  app.add_option("--abstract", abstract, "Abstract of the paper being read");
  app.add_option("--keywords", keywords, "Paper keywords")->delimiter(',');
  app.add_option("--topics", topics, "Weekly topics")->delimiter(',');
}

projection::QueryFormula QueryArgs::ToQuery() const {
  projection::QueryFormula q;
  q.latex = latex;
  q.context = context;
  if (!question.empty()) q.question = question;
  q.paper_abstract = abstract;
  q.paper_keywords = keywords;
  q.weekly_topics = topics;
  return q;
}

void AddVerbosity(CLI::App& app, bool& quiet) {
  app.add_flag("-q,--quiet", quiet, "Only report errors");
  app.parse_complete_callback([&quiet] {
    if (quiet) log::SetLevel(log::Level::kError);
  });
}

}  // namespace fem::cli
