#pragma once

#include <string_view>

#include "fem/formula/semantic_tree.h"

namespace fem::formula {

struct ParseOptions {
  // When true, an unrecognized command `\foo` becomes a function node over
  // its following argument(s); when false it raises ParseError.
  bool unknown_commands_as_functions = true;
};

// Parses LaTeX math (no surrounding `$`) into a semantic layout tree.
//
// Operators are normalized: `\cdot`, `\times`, `*` and juxtaposition all
// become `*`; `+` and `*` chains are flattened into one n-ary node. Scripts
// become `_`/`^` operator nodes (subscript applied first). Round brackets
// around a single expression are transparent; a bracketed comma list becomes
// a group node. Greek letters are variables; numbers, `e`, `\pi`, `\infty`
// are constants.
//
// Throws ParseError carrying the byte offset of the offending token.
SemanticTree ParseLatex(std::string_view latex, const ParseOptions& options = {});

}  // namespace fem::formula
