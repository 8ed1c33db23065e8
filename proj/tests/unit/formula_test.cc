#include <gtest/gtest.h>

#include <algorithm>

#include "fem/common/errors.h"
#include "fem/formula/latex_parser.h"
#include "fem/formula/mathml_parser.h"
#include "fem/formula/terms.h"
#include "oracles.h"

namespace fem::formula {
namespace {

std::vector<FormulaTerm> Sorted(TermSet s) {
  std::sort(s.terms.begin(), s.terms.end());
  return s.terms;
}

TEST(ParseLatex, SingleSymbolIsVariableLeaf) {
  const auto tree = ParseLatex("x");
  EXPECT_EQ(tree.root.kind, NodeKind::kVariable);
  EXPECT_EQ(tree.root.label, "x");
  EXPECT_TRUE(tree.root.IsLeaf());
}

TEST(ParseLatex, SumOfPowerAndFraction) {
  const auto tree = ParseLatex("x^{2}+\\frac{1}{a+b}");
  ASSERT_EQ(tree.root.label, "+");
  ASSERT_EQ(tree.root.children.size(), 2u);
  const auto& power = tree.root.children[0];
  const auto& frac = tree.root.children[1];
  EXPECT_EQ(power.label, "^");
  EXPECT_EQ(power.children[0].label, "x");
  EXPECT_EQ(power.children[1].kind, NodeKind::kConstant);
  EXPECT_EQ(frac.label, "frac");
  EXPECT_EQ(frac.children[0].label, "1");
  EXPECT_EQ(Serialize(frac.children[1]), "+(a,b)");
  EXPECT_TRUE(IsWellFormed(tree.root));
}

TEST(ParseLatex, DeterministicOnReparse) {
  const char* input = "\\sum_{i=1}^{n} x_i^2 + \\sqrt{\\alpha\\beta}";
  EXPECT_EQ(ParseLatex(input), ParseLatex(input));
}

TEST(ParseLatex, MissingArgumentReportsOffset) {
  try {
    ParseLatex("\\frac{1}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 8u);
  }
}

TEST(ParseLatex, UnbalancedBraceIsError) {
  EXPECT_THROW(ParseLatex("x^{2"), ParseError);
  EXPECT_THROW(ParseLatex("x}"), ParseError);
}

TEST(ParseLatex, EmptyArgumentIsError) { EXPECT_THROW(ParseLatex("a_{}"), ParseError); }

TEST(ParseLatex, UnknownCommandConfigurable) {
  EXPECT_NO_THROW(ParseLatex("\\foo{x}+y"));
  ParseOptions strict;
  strict.unknown_commands_as_functions = false;
  EXPECT_THROW(ParseLatex("\\foo{x}+y", strict), ParseError);
}

TEST(ParseLatex, EmptyInputIsError) { EXPECT_THROW(ParseLatex(""), ParseError); }

TEST(ParseMathML, MatchesEquivalentLatex) {
  const char* mathml =
      "<math xmlns=\"http://www.w3.org/1998/Math/MathML\"><mrow><msup><mi>x</mi><mn>2</mn></msup><mo>+</mo>"
      "<mfrac><mn>1</mn><mrow><mi>a</mi><mo>+</mo><mi>b</mi></mrow></mfrac></mrow></math>";
  EXPECT_EQ(ParseMathML(mathml), ParseLatex("x^{2}+\\frac{1}{a+b}"));
  EXPECT_EQ(ParseFormula(mathml), ParseFormula("x^{2}+\\frac{1}{a+b}"));
}

TEST(ExtractTerms, LeafYieldsNothing) {
  const auto terms = ExtractTerms(ParseLatex("x"));
  EXPECT_TRUE(terms.empty());
  EXPECT_EQ(Complexity(terms), 0u);
}

TEST(ExtractTerms, PowerHasTwoLevelOneTerms) {
  const auto terms = ExtractTerms(ParseLatex("x^{2}"));
  ASSERT_EQ(terms.size(), 2u);
  EXPECT_EQ(terms.terms[0].kind, TermKind::kOriginal);
  EXPECT_EQ(terms.terms[0].serialization, "^(x,2)");
  EXPECT_EQ(terms.terms[1].kind, TermKind::kGeneralized);
  EXPECT_EQ(terms.terms[1].serialization, "^(*_v,*_c)");
  EXPECT_EQ(terms.terms[0].level, 1);
  EXPECT_EQ(terms.terms[1].level, 1);
  EXPECT_EQ(Complexity(terms), 2u);
}

TEST(ExtractTerms, FigureExampleMatchesOracle) {
  const auto tree = ParseLatex("x^{2}+\\frac{1}{a+b}");
  EXPECT_EQ(Sorted(ExtractTerms(tree)), testing::BruteForceTerms(tree.root));
  // Levels: + at 1, ^ and frac at 2, a+b at 3; two terms each.
  EXPECT_EQ(Complexity(ExtractTerms(tree)), 16u);
}

TEST(ExtractTerms, GeneralizedTermsCarryOnlyWildcards) {
  const auto terms = ExtractTerms(ParseLatex("y=\\alpha x^{3}+2b"));
  for (const auto& t : terms.terms) {
    if (t.kind != TermKind::kGeneralized) continue;
    for (const char* concrete : {"(y", "(x", ",x", ",b", "alpha", ",2", "(2", ",3"}) {
      EXPECT_EQ(t.serialization.find(concrete), std::string::npos) << t.serialization;
    }
  }
}

TEST(ExtractTerms, RandomTreesMatchOracle) {
  testing::Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    SemanticTree tree{testing::RandomTree(rng, 4)};
    ASSERT_TRUE(IsWellFormed(tree.root));
    const auto terms = ExtractTerms(tree);
    EXPECT_EQ(Sorted(terms), testing::BruteForceTerms(tree.root));
    EXPECT_EQ(Complexity(terms), testing::BruteForceComplexity(tree.root));
  }
}

TEST(Generalize, Idempotent) {
  testing::Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto t = testing::RandomTree(rng, 4);
    EXPECT_EQ(Generalize(Generalize(t)), Generalize(t));
    EXPECT_EQ(SerializeGeneralized(t), Serialize(Generalize(t)));
  }
}

TEST(Complexity, MonotoneUnderGrafting) {
  testing::Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    auto t = testing::RandomTree(rng, 3);
    const auto before = Complexity(ExtractTerms(SemanticTree{t}));
    const auto graft = Node(NodeKind::kOperator, "+", {Leaf(NodeKind::kVariable, "q"), Leaf(NodeKind::kConstant, "1")});
    if (t.IsLeaf()) {
      t = Node(NodeKind::kOperator, "*", {t, graft});
    } else {
      t.children.push_back(graft);
    }
    EXPECT_GE(Complexity(ExtractTerms(SemanticTree{t})), before);
  }
}

TEST(LayoutTransition, SelfIsOneDisjointIsZero) {
  testing::Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto x = testing::RandomTermSet(rng, "p", 1 + rng() % 12);
    const auto y = testing::RandomTermSet(rng, "q", 1 + rng() % 12);
    EXPECT_NEAR(LayoutTransition(x, x), 1.0, 1e-9);
    EXPECT_EQ(LayoutTransition(x, y), 0.0);
    const double s = LayoutTransition(x, testing::RandomTermSet(rng, "p", 1 + rng() % 12));
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST(LayoutTransition, EmptySourceIsZero) {
  const auto x = ExtractTerms(ParseLatex("a+b"));
  EXPECT_EQ(LayoutTransition(x, TermSet{}), 0.0);
  EXPECT_EQ(LayoutTransition(TermSet{}, x), 0.0);
}

TEST(LayoutTransition, HandEvaluatedExample) {
  // Source "a+b": +(a,b) and +(*_v,*_v), both at level 1. In the target they
  // sit at level 3, so both match with level weight 1/3; coverage is 1.
  const auto source = ExtractTerms(ParseLatex("a+b"));
  const auto target = ExtractTerms(ParseLatex("x^{2}+\\frac{1}{a+b}"));
  const double expected = 1.0 * (1.0 * (1.0 / 3.0) + 0.5 * (1.0 / 3.0)) / (1.0 + 0.5);
  EXPECT_NEAR(LayoutTransition(target, source), expected, 1e-12);
  // Reverse direction: only the two a+b terms among 8 source terms match.
  const double reverse = (2.0 / 8.0) * (1.0 / 3.0 + 0.5 / 3.0) / (4 * 1.0 + 4 * 0.5);
  EXPECT_NEAR(LayoutTransition(source, target), reverse, 1e-12);
}

TEST(LayoutTransition, GeneralizedPenaltyApplies) {
  // Only the generalized term matches: score = coverage(1/2) * w_gen / (1 + w_gen).
  TermSet source;
  source.terms = {{"+(a,b)", TermKind::kOriginal, 1}, {"+(*_v,*_v)", TermKind::kGeneralized, 1}};
  TermSet target;
  target.terms = {{"+(x,y)", TermKind::kOriginal, 1}, {"+(*_v,*_v)", TermKind::kGeneralized, 1}};
  EXPECT_DOUBLE_EQ(LayoutTransition(target, source), 0.5 * 0.5 / 1.5);
  LayoutWeights w;
  w.generalized = 0.25;
  EXPECT_DOUBLE_EQ(LayoutTransition(target, source, w), 0.5 * 0.25 / 1.25);
}

}  // namespace
}  // namespace fem::formula
