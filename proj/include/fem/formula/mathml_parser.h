#pragma once

#include <string>
#include <string_view>

#include "fem/formula/latex_parser.h"
#include "fem/formula/semantic_tree.h"

namespace fem::formula {

// Translates Presentation MathML into the equivalent LaTeX token stream.
// Throws ParseError (offset into the XML) on malformed markup.
std::string MathMLToLatex(std::string_view mathml);

// Presentation MathML front-end. Produces the same tree ParseLatex builds for
// the equivalent LaTeX.
SemanticTree ParseMathML(std::string_view mathml, const ParseOptions& options = {});

// Dispatches on content: input starting with `<` is MathML, otherwise LaTeX.
SemanticTree ParseFormula(std::string_view text, const ParseOptions& options = {});

}  // namespace fem::formula
