#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "fem/common/errors.h"
#include "fem/formula/latex_parser.h"
#include "fem/formula/mathml_parser.h"
#include "fem/ingest/birth_times.h"
#include "fem/ingest/corpus.h"
#include "fem/ingest/ingest_io.h"
#include "fem/text/tokenize.h"
#include "fixture.h"
#include "oracles.h"

namespace fem::ingest {
namespace {

Corpus Parse(const std::string& text, const IngestOptions& options = {}) {
  std::istringstream in(text);
  return ParseCorpus(in, options);
}

RawFormula Formula(const std::string& id, const std::string& latex, std::vector<std::string> pages) {
  const auto tree = formula::ParseLatex(latex);
  RawFormula f;
  f.id = id;
  f.latex = latex;
  f.home_pages = std::move(pages);
  f.variable_count = formula::CountVariables(tree.root);
  f.operator_count = formula::CountOperators(tree.root);
  return f;
}

const char* kThreePages =
    R"({"id":"p1","title":"Bayes' theorem","text":"Intro <math>P(A|B)=\\frac{P(B|A)P(A)}{P(B)}</math> and <math>x+y</math>.","links":["p2","missing"]})"
    "\n"
    R"({"id":"p2","title":"Entropy","text":"Entropy <math>H=-\\sum_{i} p_i \\log p_i</math> then <math>\\frac{1}</math>.","links":["p1"]})"
    "\n\n"
    R"({"id":"p3","title":"Fourier","text":"Transform <math>X(k)=\\sum_n x_n e^{-i k n}</math>.","links":[]})"
    "\n";

TEST(LoadCorpus, CountsPagesFormulasAndSkips) {
  const auto c = Parse(kThreePages);
  EXPECT_EQ(c.pages.size(), 3u);
  EXPECT_EQ(c.math_spans, 5u);
  EXPECT_EQ(c.formulas.size(), 4u);
  EXPECT_EQ(c.skipped_spans, 1u);
  EXPECT_EQ(c.dropped_links, 1u);
  EXPECT_EQ(c.pages[0].outlinks, (std::vector<std::string>{"p2"}));
  for (const auto& f : c.formulas) {
    ASSERT_EQ(f.home_pages.size(), 1u);
    EXPECT_FALSE(f.context.empty());
  }
}

TEST(LoadCorpus, IdsAreContentDerivedAndStable) {
  const auto a = Parse(kThreePages);
  const auto b = Parse(kThreePages);
  ASSERT_EQ(a.formulas.size(), b.formulas.size());
  for (std::size_t i = 0; i < a.formulas.size(); ++i) EXPECT_EQ(a.formulas[i].id, b.formulas[i].id);
  EXPECT_EQ(a.formulas[0].id.size(), 16u);
  EXPECT_TRUE(std::is_sorted(a.formulas.begin(), a.formulas.end(),
                             [](const auto& x, const auto& y) { return x.id < y.id; }));
}

TEST(LoadCorpus, DeduplicatesWithinPage) {
  const auto c = Parse(R"({"id":"p","title":"T","text":"<math>a+b</math> again <math>a + b</math>","links":[]})");
  ASSERT_EQ(c.formulas.size(), 1u);
  EXPECT_EQ(c.formulas[0].home_pages, (std::vector<std::string>{"p"}));
  EXPECT_EQ(c.duplicate_spans, 1u);
}

TEST(LoadCorpus, SameFormulaOnTwoPagesStaysDistinct) {
  const auto c = Parse(
      R"({"id":"p","title":"T","text":"<math>a+b</math>","links":[]})"
      "\n"
      R"({"id":"q","title":"U","text":"<math>a+b</math>","links":[]})");
  EXPECT_EQ(c.formulas.size(), 2u);
  EXPECT_NE(c.formulas[0].id, c.formulas[1].id);
}

TEST(LoadCorpus, EmptyInputThrows) {
  EXPECT_THROW(Parse(""), EmptyCorpusError);
  EXPECT_THROW(Parse("\n  \n"), EmptyCorpusError);
}

TEST(LoadCorpus, MalformedRecordReportsLine) {
  try {
    Parse(R"({"id":"p","title":"T","text":"","links":[]})"
          "\n{not json\n");
    FAIL();
  } catch (const CorpusFormatError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(Parse(R"({"title":"no id","text":""})"), CorpusFormatError);
}

TEST(LoadCorpus, DuplicatePageIdThrows) {
  EXPECT_THROW(Parse(R"({"id":"p","title":"T","text":""})"
                     "\n"
                     R"({"id":"p","title":"U","text":""})"),
               CorpusFormatError);
}

TEST(SplitMath, ExtractsSpansAndDecodesEntities) {
  const auto s = SplitMath("a <math>x &lt; y</math> b <math>z</math>");
  ASSERT_EQ(s.spans.size(), 2u);
  EXPECT_EQ(s.spans[0].latex, "x < y");
  EXPECT_EQ(s.spans[1].latex, "z");
  EXPECT_EQ(s.text.find("<math>"), std::string::npos);
}

TEST(ContextWindow, WordWindowIsBounded) {
  std::string text;
  for (int i = 0; i < 1000; ++i) text += "w" + std::to_string(i) + " ";
  IngestOptions words;
  const auto ctx = ContextWindow(text, text.size() / 2, words);
  EXPECT_LE(text::Tokenize(ctx).size(), 250u);
  EXPECT_GE(text::Tokenize(ctx).size(), 240u);
  IngestOptions chars{ContextUnit::kCharacters, 250};
  EXPECT_LE(ContextWindow(text, text.size() / 2, chars).size(), 250u);
}

TEST(FilterFormulas, TwoVariablesAndThreeOperators) {
  const std::vector<RawFormula> in = {
      Formula("a", "a+b", {"p"}),
      Formula("b", "x^{2}+\\frac{1}{a+b}", {"p"}),
      Formula("c", "\\pi", {"p"}),
      Formula("d", "x^{2}+x^{3}+\\sqrt{x}", {"p"}),
  };
  EXPECT_EQ(in[1].variable_count, 3u);
  EXPECT_GE(in[1].operator_count, 3u);
  const auto kept = FilterFormulas(in);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].id, "b");
}

TEST(BirthTimes, EarliestYearAcrossMatchesAndHomePages) {
  const std::vector<WikiPage> pages = {{"p1", "Bayes' theorem", "", {}}, {"p2", "Conditional probability", "", {}},
                                       {"p3", "Unmentioned topic", "", {}}};
  const std::vector<RawFormula> formulas = {Formula("f1", "a+b", {"p1"}), Formula("f2", "a+b", {"p1", "p2"}),
                                            Formula("f3", "a+b", {"p3"})};
  const std::vector<DatedPaper> papers = {{"x", 1995, "we apply bayes theorem"},
                                          {"y", 1970, "Bayes' Theorem revisited"},
                                          {"z", 1960, "conditional probability basics"}};
  const auto births = MineBirthTimes(formulas, pages, papers);
  EXPECT_EQ(births.at("f1"), 1970);
  EXPECT_EQ(births.at("f2"), 1960);
  EXPECT_FALSE(births.at("f3").has_value());
}

TEST(BirthTimes, PaperCorpusRequiresFourDigitYear) {
  const auto dir = testing::MakeTempDir("papers");
  std::ofstream(dir / "ok.jsonl") << R"({"title":"a","year":1999,"text":"t"})" << "\n"
                                  << R"({"title":"b","year":"2001","text":"t"})" << "\n";
  EXPECT_EQ(LoadPaperCorpus(dir / "ok.jsonl").size(), 2u);
  std::ofstream(dir / "bad.jsonl") << R"({"title":"a","year":99,"text":"t"})" << "\n";
  EXPECT_THROW(LoadPaperCorpus(dir / "bad.jsonl"), CorpusFormatError);
}

TEST(IngestIo, RoundTrip) {
  const auto corpus = Parse(kThreePages);
  IngestSummary summary;
  const auto out = RunIngest(corpus, nullptr, FilterRule{0, 0}, &summary);
  EXPECT_EQ(summary.formulas_kept, 4u);
  const auto dir = testing::MakeTempDir("ingest");
  WriteIngestOutput(dir, out, summary);
  const auto back = ReadIngestOutput(dir);
  ASSERT_EQ(back.formulas.size(), out.formulas.size());
  for (std::size_t i = 0; i < out.formulas.size(); ++i) {
    EXPECT_EQ(back.formulas[i].formula.id, out.formulas[i].formula.id);
    EXPECT_EQ(back.formulas[i].formula.context, out.formulas[i].formula.context);
    EXPECT_EQ(back.formulas[i].birth_year, out.formulas[i].birth_year);
  }
  EXPECT_EQ(back.pages.size(), 3u);
}

TEST(IngestFixture, FilterRuleHoldsExactly) {
  const auto corpus = LoadCorpus(testing::FixtureDir() / "wiki.jsonl");
  std::set<std::string> expected;
  for (const auto& f : corpus.formulas) {
    const auto counts = testing::WalkCounts(formula::ParseFormula(f.latex).root);
    if (counts.variables >= 2 && counts.operators >= 3) expected.insert(f.id);
  }
  std::set<std::string> kept;
  for (const auto& f : FilterFormulas(corpus.formulas)) kept.insert(f.id);
  EXPECT_EQ(kept, expected);
  EXPECT_LT(kept.size(), corpus.formulas.size());
  EXPECT_FALSE(kept.empty());
}

}  // namespace
}  // namespace fem::ingest
