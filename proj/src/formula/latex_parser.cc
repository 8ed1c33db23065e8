#include "fem/formula/latex_parser.h"

#include <cctype>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fem/common/errors.h"

namespace fem::formula {
namespace {

enum class Tok {
  kIdent,    // single letter or UTF-8 symbol
  kNumber,   // 12, 3.5
  kCommand,  // \name (text holds name without backslash)
  kSymbol,   // + - * / = < > ( ) [ ] | , ! ' : ;
  kLBrace,
  kRBrace,
  kCaret,
  kUnderscore,
  kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

// Commands that carry no structure.
const std::unordered_set<std::string>& IgnoredCommands() {
  static const std::unordered_set<std::string> k = {
      ",", ";", ":", "!", " ", "quad", "qquad", "displaystyle", "textstyle",
      "scriptstyle", "scriptscriptstyle", "limits", "nolimits", "left", "right",
      "big", "Big", "bigg", "Bigg", "bigl", "bigr", "Bigl", "Bigr", "biggl",
      "biggr", "Biggl", "Biggr", "middle", "not", "\\", "nonumber", "notag",
      "thinspace", "medspace", "thickspace", "enspace", "phantom_"};
  return k;
}

// Text-mode commands whose braced argument is dropped entirely.
const std::unordered_set<std::string>& TextCommands() {
  static const std::unordered_set<std::string> k = {
      "text", "textrm", "textit", "textbf", "textsf", "texttt", "mbox", "hbox",
      "label", "tag", "hspace", "vspace", "phantom", "hphantom", "vphantom"};
  return k;
}

const std::unordered_set<std::string>& GreekCommands() {
  static const std::unordered_set<std::string> k = {
      "alpha", "beta", "gamma", "delta", "epsilon", "varepsilon", "zeta", "eta",
      "theta", "vartheta", "iota", "kappa", "lambda", "mu", "nu", "xi", "omicron",
      "rho", "varrho", "sigma", "varsigma", "tau", "upsilon", "phi", "varphi",
      "chi", "psi", "omega", "Gamma", "Delta", "Theta", "Lambda", "Xi", "Pi",
      "Sigma", "Upsilon", "Phi", "Psi", "Omega", "ell", "hbar", "imath", "jmath"};
  return k;
}

const std::unordered_set<std::string>& ConstantCommands() {
  static const std::unordered_set<std::string> k = {"pi", "infty", "emptyset",
                                                    "varnothing", "aleph", "prime"};
  return k;
}

const std::unordered_set<std::string>& DotCommands() {
  static const std::unordered_set<std::string> k = {"ldots", "cdots", "dots",
                                                    "vdots", "ddots", "dotsc",
                                                    "dotsb"};
  return k;
}

// Named functions taking one operand: \sin x, \log_2 x.
const std::unordered_set<std::string>& NamedFunctions() {
  static const std::unordered_set<std::string> k = {
      "sin", "cos", "tan", "cot", "sec", "csc", "arcsin", "arccos", "arctan",
      "sinh", "cosh", "tanh", "coth", "log", "ln", "lg", "exp", "det", "dim",
      "ker", "arg", "deg", "gcd", "Pr", "hom", "tr", "Tr", "sgn", "var", "Var",
      "cov", "Cov", "diag", "rank", "erf"};
  return k;
}

// Operators whose body extends over a product: \sum_i a_i b_i.
const std::unordered_set<std::string>& BigOperators() {
  static const std::unordered_set<std::string> k = {
      "sum", "prod", "coprod", "int", "iint", "iiint", "oint", "bigcup",
      "bigcap", "bigoplus", "bigotimes", "bigvee", "bigwedge", "max", "min",
      "sup", "inf", "lim", "limsup", "liminf", "argmax", "argmin"};
  return k;
}

const std::unordered_set<std::string>& AccentCommands() {
  static const std::unordered_set<std::string> k = {
      "hat", "widehat", "bar", "overline", "underline", "tilde", "widetilde",
      "vec", "dot", "ddot", "check", "breve", "acute", "grave", "overrightarrow",
      "overleftarrow", "overbrace", "underbrace"};
  return k;
}

// Font switches are transparent: \mathbf{x} parses as x.
const std::unordered_set<std::string>& FontCommands() {
  static const std::unordered_set<std::string> k = {
      "mathbf", "mathrm", "mathit", "mathcal", "mathbb", "mathsf", "mathtt",
      "mathfrak", "mathscr", "boldsymbol", "bm", "pmb", "mathnormal"};
  return k;
}

const std::unordered_map<std::string, std::string>& RelationCommands() {
  static const std::unordered_map<std::string, std::string> k = {
      {"leq", "leq"}, {"le", "leq"}, {"leqslant", "leq"}, {"geq", "geq"},
      {"ge", "geq"}, {"geqslant", "geq"}, {"neq", "neq"}, {"ne", "neq"},
      {"approx", "approx"}, {"equiv", "equiv"}, {"sim", "sim"},
      {"simeq", "simeq"}, {"cong", "cong"}, {"propto", "propto"}, {"in", "in"},
      {"notin", "notin"}, {"ni", "ni"}, {"subset", "subset"},
      {"subseteq", "subseteq"}, {"supset", "supset"}, {"supseteq", "supseteq"},
      {"to", "to"}, {"rightarrow", "to"}, {"longrightarrow", "to"},
      {"mapsto", "mapsto"}, {"Rightarrow", "implies"}, {"implies", "implies"},
      {"Longrightarrow", "implies"}, {"Leftarrow", "impliedby"},
      {"Leftrightarrow", "iff"}, {"iff", "iff"}, {"leftarrow", "gets"},
      {"gets", "gets"}, {"ll", "ll"}, {"gg", "gg"}, {"mid", "mid"},
      {"perp", "perp"}, {"parallel", "parallel"}, {"coloneqq", ":="},
      {"triangleq", "triangleq"}, {"doteq", "doteq"}, {"prec", "prec"},
      {"succ", "succ"}, {"preceq", "preceq"}, {"succeq", "succeq"},
      {"vdash", "vdash"}, {"models", "models"}};
  return k;
}

const std::unordered_map<std::string, std::string>& AdditiveCommands() {
  static const std::unordered_map<std::string, std::string> k = {
      {"pm", "pm"}, {"mp", "mp"}, {"oplus", "oplus"}, {"cup", "cup"},
      {"vee", "vee"}, {"lor", "vee"}, {"setminus", "setminus"}};
  return k;
}

const std::unordered_map<std::string, std::string>& MultiplicativeCommands() {
  static const std::unordered_map<std::string, std::string> k = {
      {"cdot", "*"}, {"times", "*"}, {"ast", "*"}, {"div", "/"},
      {"circ", "circ"}, {"otimes", "otimes"}, {"odot", "odot"}, {"cap", "cap"},
      {"wedge", "wedge"}, {"land", "wedge"}, {"star", "star"},
      {"bullet", "bullet"}};
  return k;
}

bool IsLetter(unsigned char c) { return std::isalpha(c) != 0; }
bool IsDigit(unsigned char c) { return std::isdigit(c) != 0; }

std::size_t Utf8Length(unsigned char lead) {
  if (lead >= 0xF0) return 4;
  if (lead >= 0xE0) return 3;
  if (lead >= 0xC0) return 2;
  return 1;
}

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view src) : src_(src) {}

  std::vector<Token> Run() {
    std::vector<Token> out;
    while (pos_ < src_.size()) {
      const unsigned char c = static_cast<unsigned char>(src_[pos_]);
      const std::size_t start = pos_;
      if (std::isspace(c) || c == '~' || c == '&' || c == '$') {
        ++pos_;
      } else if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (c == '\\') {
        LexCommand(out);
      } else if (IsLetter(c)) {
        out.push_back({Tok::kIdent, std::string(1, static_cast<char>(c)), start});
        ++pos_;
      } else if (IsDigit(c) || (c == '.' && pos_ + 1 < src_.size() &&
                                IsDigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        while (pos_ < src_.size() && IsDigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ + 1 < src_.size() && src_[pos_] == '.' &&
            IsDigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
          ++pos_;
          while (pos_ < src_.size() && IsDigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        } else if (start == pos_ && src_[pos_] == '.') {
          ++pos_;
          while (pos_ < src_.size() && IsDigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        out.push_back({Tok::kNumber, std::string(src_.substr(start, pos_ - start)), start});
      } else if (c == '{') {
        out.push_back({Tok::kLBrace, "{", start});
        ++pos_;
      } else if (c == '}') {
        out.push_back({Tok::kRBrace, "}", start});
        ++pos_;
      } else if (c == '^') {
        out.push_back({Tok::kCaret, "^", start});
        ++pos_;
      } else if (c == '_') {
        out.push_back({Tok::kUnderscore, "_", start});
        ++pos_;
      } else if (c >= 0x80) {
        const std::size_t len = std::min(Utf8Length(c), src_.size() - pos_);
        out.push_back({Tok::kIdent, std::string(src_.substr(pos_, len)), start});
        pos_ += len;
      } else if (std::string_view("+-*/=<>()[]|,!':;").find(static_cast<char>(c)) !=
                 std::string_view::npos) {
        if (c == ':' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
          out.push_back({Tok::kSymbol, ":=", start});
          pos_ += 2;
        } else {
          out.push_back({Tok::kSymbol, std::string(1, static_cast<char>(c)), start});
          ++pos_;
        }
      } else if (c == '.') {
        // A bare full stop ends a displayed sentence; it carries no structure.
        ++pos_;
      } else {
        throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'",
                         start);
      }
    }
    out.push_back({Tok::kEnd, "", src_.size()});
    return out;
  }

 private:
  void LexCommand(std::vector<Token>& out) {
    const std::size_t start = pos_;
    ++pos_;  // backslash
    if (pos_ >= src_.size()) throw ParseError("dangling backslash", start);
    std::string name;
    if (IsLetter(static_cast<unsigned char>(src_[pos_]))) {
      while (pos_ < src_.size() && IsLetter(static_cast<unsigned char>(src_[pos_]))) {
        name += src_[pos_++];
      }
    } else {
      name = std::string(1, src_[pos_++]);
    }
    if (name == "left" || name == "right" || name.rfind("big", 0) == 0 ||
        name.rfind("Big", 0) == 0) {
      // Sizing prefixes; `\left.` is an invisible delimiter.
      if (IgnoredCommands().count(name)) {
        SkipSpaces();
        if (pos_ < src_.size() && src_[pos_] == '.') ++pos_;
        return;
      }
    }
    if (IgnoredCommands().count(name)) return;
    if (TextCommands().count(name)) {
      SkipSpaces();
      if (pos_ < src_.size() && src_[pos_] == '{') SkipBraced();
      return;
    }
    out.push_back({Tok::kCommand, std::move(name), start});
  }

  void SkipSpaces() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  void SkipBraced() {
    const std::size_t open = pos_;
    int depth = 0;
    while (pos_ < src_.size()) {
      const char c = src_[pos_++];
      if (c == '\\') {
        ++pos_;
        continue;
      }
      if (c == '{') ++depth;
      if (c == '}' && --depth == 0) return;
    }
    throw ParseError("unbalanced '{'", open);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

void CheckBraces(const std::vector<Token>& tokens) {
  std::vector<std::size_t> open;
  for (const auto& t : tokens) {
    if (t.kind == Tok::kLBrace) {
      open.push_back(t.offset);
    } else if (t.kind == Tok::kRBrace) {
      if (open.empty()) throw ParseError("unbalanced '}'", t.offset);
      open.pop_back();
    }
  }
  if (!open.empty()) throw ParseError("unbalanced '{'", open.back());
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const ParseOptions& options)
      : toks_(std::move(tokens)), options_(options) {}

  TreeNode ParseAll() {
    if (Peek().kind == Tok::kEnd) throw ParseError("empty formula", 0);
    TreeNode root = ParseList();
    if (Peek().kind != Tok::kEnd) {
      throw ParseError("unexpected '" + Peek().text + "'", Peek().offset);
    }
    return root;
  }

 private:
  const Token& Peek(std::size_t ahead = 0) const {
    const std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  Token Next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  bool IsSymbol(const Token& t, std::string_view s) const {
    return t.kind == Tok::kSymbol && t.text == s;
  }
  bool IsCommand(const Token& t, std::string_view s) const {
    return t.kind == Tok::kCommand && t.text == s;
  }

  void Expect(Tok kind, std::string_view text, std::string_view what) {
    const Token& t = Peek();
    if (t.kind != kind || (!text.empty() && t.text != text)) {
      throw ParseError("expected " + std::string(what), t.offset);
    }
    ++pos_;
  }

  // a, b, c
  TreeNode ParseList() {
    std::vector<TreeNode> items;
    items.push_back(ParseRelation());
    while (IsSymbol(Peek(), ",") || IsSymbol(Peek(), ";")) {
      Next();
      items.push_back(ParseRelation());
    }
    if (items.size() == 1) return std::move(items.front());
    return Node(NodeKind::kGroup, "list", std::move(items));
  }

  std::optional<std::string> RelationLabel(const Token& t) const {
    if (t.kind == Tok::kSymbol) {
      if (t.text == "=" || t.text == "<" || t.text == ">" || t.text == ":=" ||
          t.text == ":") {
        return t.text;
      }
      if (t.text == "|" && abs_depth_ == 0) return std::string("mid");
      return std::nullopt;
    }
    if (t.kind == Tok::kCommand) {
      auto it = RelationCommands().find(t.text);
      if (it != RelationCommands().end()) return it->second;
    }
    return std::nullopt;
  }

  TreeNode ParseRelation() {
    TreeNode lhs = ParseAdditive();
    while (auto label = RelationLabel(Peek())) {
      const Token op = Next();
      if (AtOperandEnd()) throw ParseError("missing right operand of '" + op.text + "'", op.offset);
      TreeNode rhs = ParseAdditive();
      lhs = Node(NodeKind::kOperator, *label, {std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  std::optional<std::string> AdditiveLabel(const Token& t) const {
    if (t.kind == Tok::kSymbol && (t.text == "+" || t.text == "-")) return t.text;
    if (t.kind == Tok::kCommand) {
      auto it = AdditiveCommands().find(t.text);
      if (it != AdditiveCommands().end()) return it->second;
    }
    return std::nullopt;
  }

  TreeNode ParseAdditive() {
    TreeNode lhs = ParseMultiplicative();
    bool flat_plus = false;
    while (auto label = AdditiveLabel(Peek())) {
      const Token op = Next();
      if (AtOperandEnd()) throw ParseError("missing right operand of '" + op.text + "'", op.offset);
      TreeNode rhs = ParseMultiplicative();
      if (*label == "+" && flat_plus) {
        lhs.children.push_back(std::move(rhs));
      } else {
        lhs = Node(NodeKind::kOperator, *label, {std::move(lhs), std::move(rhs)});
        flat_plus = (*label == "+");
      }
    }
    return lhs;
  }

  std::optional<std::string> MultiplicativeLabel(const Token& t) const {
    if (t.kind == Tok::kSymbol && t.text == "*") return std::string("*");
    if (t.kind == Tok::kSymbol && t.text == "/") return std::string("/");
    if (t.kind == Tok::kCommand) {
      auto it = MultiplicativeCommands().find(t.text);
      if (it != MultiplicativeCommands().end()) return it->second;
    }
    return std::nullopt;
  }

  TreeNode ParseMultiplicative() {
    TreeNode lhs = ParseUnary();
    bool flat_times = false;
    while (true) {
      std::string label;
      if (auto explicit_op = MultiplicativeLabel(Peek())) {
        const Token op = Next();
        if (AtOperandEnd()) {
          throw ParseError("missing right operand of '" + op.text + "'", op.offset);
        }
        label = *explicit_op;
      } else if (StartsImplicitOperand(Peek())) {
        label = "*";
      } else {
        break;
      }
      TreeNode rhs = ParseUnary();
      if (label == "*" && flat_times) {
        lhs.children.push_back(std::move(rhs));
      } else {
        lhs = Node(NodeKind::kOperator, label, {std::move(lhs), std::move(rhs)});
        flat_times = (label == "*");
      }
    }
    return lhs;
  }

  // True when the next token cannot begin an operand.
  bool AtOperandEnd() const {
    const Token& t = Peek();
    if (t.kind == Tok::kEnd || t.kind == Tok::kRBrace) return true;
    if (t.kind == Tok::kSymbol &&
        (t.text == ")" || t.text == "]" || t.text == "," || t.text == ";")) {
      return true;
    }
    return false;
  }

  bool IsClosingCommand(const std::string& name) const {
    return name == "rangle" || name == "}" || name == "rfloor" || name == "rceil" ||
           name == "|";
  }

  bool StartsImplicitOperand(const Token& t) const {
    switch (t.kind) {
      case Tok::kIdent:
      case Tok::kNumber:
      case Tok::kLBrace:
        return true;
      case Tok::kSymbol:
        return t.text == "(" || t.text == "[";
      case Tok::kCommand: {
        const std::string& n = t.text;
        if (IsClosingCommand(n)) return false;
        if (RelationCommands().count(n) || AdditiveCommands().count(n) ||
            MultiplicativeCommands().count(n)) {
          return false;
        }
        return true;
      }
      default:
        return false;
    }
  }

  TreeNode ParseUnary() {
    const Token& t = Peek();
    if (IsSymbol(t, "-") || IsSymbol(t, "+") || IsCommand(t, "pm") || IsCommand(t, "mp")) {
      const Token op = Next();
      if (AtOperandEnd()) throw ParseError("missing operand of '" + op.text + "'", op.offset);
      TreeNode operand = ParseUnary();
      if (op.text == "+") return operand;
      return Node(NodeKind::kOperator, op.text, {std::move(operand)});
    }
    if (IsCommand(t, "neg") || IsCommand(t, "lnot")) {
      const Token op = Next();
      if (AtOperandEnd()) throw ParseError("missing operand of '\\neg'", op.offset);
      return Node(NodeKind::kOperator, "neg", {ParseUnary()});
    }
    return ParsePostfix();
  }

  TreeNode ParsePostfix() { return ApplyPostfix(ParsePrimary()); }

  TreeNode ApplyPostfix(TreeNode base) {
    while (true) {
      auto [sub, sup] = ParseScripts();
      if (sub) base = Node(NodeKind::kOperator, "_", {std::move(base), std::move(*sub)});
      if (sup) base = Node(NodeKind::kOperator, "^", {std::move(base), std::move(*sup)});
      if (IsSymbol(Peek(), "!")) {
        Next();
        base = Node(NodeKind::kOperator, "!", {std::move(base)});
        continue;
      }
      if (IsSymbol(Peek(), "'")) {
        Next();
        base = Node(NodeKind::kOperator, "'", {std::move(base)});
        continue;
      }
      if (!sub && !sup) return base;
    }
  }

  std::pair<std::optional<TreeNode>, std::optional<TreeNode>> ParseScripts() {
    std::optional<TreeNode> sub, sup;
    while (Peek().kind == Tok::kCaret || Peek().kind == Tok::kUnderscore) {
      const Token op = Next();
      auto& slot = op.kind == Tok::kCaret ? sup : sub;
      if (slot) {
        throw ParseError(op.kind == Tok::kCaret ? "double superscript" : "double subscript",
                         op.offset);
      }
      slot = ParseScriptArgument(op);
    }
    return {std::move(sub), std::move(sup)};
  }

  // Argument of ^, _, \frac, accents: a braced group or a single token.
  TreeNode ParseScriptArgument(const Token& owner) {
    Token& t = toks_[std::min(pos_, toks_.size() - 1)];
    switch (t.kind) {
      case Tok::kLBrace:
        return ParseBracedRequired();
      case Tok::kNumber: {
        // `x^23` means x^2 followed by 3.
        if (t.text.size() > 1 && IsDigit(static_cast<unsigned char>(t.text[0]))) {
          TreeNode digit = Leaf(NodeKind::kConstant, t.text.substr(0, 1));
          t.text.erase(0, 1);
          t.offset += 1;
          return digit;
        }
        Next();
        return Leaf(NodeKind::kConstant, t.text);
      }
      case Tok::kIdent: {
        const Token id = Next();
        return IdentLeaf(id);
      }
      case Tok::kCommand:
        if (IsClosingCommand(t.text)) break;
        return ParsePrimary();
      case Tok::kSymbol:
        if (t.text == "'" || t.text == "*" || t.text == "+" || t.text == "-") {
          const Token s = Next();
          return Leaf(NodeKind::kConstant, s.text == "'" ? "prime" : s.text);
        }
        break;
      default:
        break;
    }
    throw ParseError("missing argument for '" + owner.text + "'", t.offset);
  }

  TreeNode ParseBracedRequired() {
    const Token open = Peek();
    Expect(Tok::kLBrace, "", "'{'");
    if (Peek().kind == Tok::kRBrace) throw ParseError("empty argument", open.offset);
    TreeNode inner = ParseList();
    Expect(Tok::kRBrace, "", "'}'");
    return inner;
  }

  TreeNode IdentLeaf(const Token& t) const {
    if (t.text == "e") return Leaf(NodeKind::kConstant, "e");
    return Leaf(NodeKind::kVariable, t.text);
  }

  TreeNode ParseDelimited(const std::string& open_text, std::size_t open_offset) {
    if (AtOperandEnd() && !IsSymbol(Peek(), ",")) {
      throw ParseError("empty '" + open_text + "' group", open_offset);
    }
    TreeNode inner = ParseList();
    const Token& close = Peek();
    if (!(IsSymbol(close, ")") || IsSymbol(close, "]"))) {
      throw ParseError("unclosed '" + open_text + "'", open_offset);
    }
    Next();
    if (inner.kind == NodeKind::kGroup && inner.label == "list") {
      inner.label = open_text == "(" ? "paren" : "brack";
    }
    return inner;
  }

  TreeNode ParseFencedCommand(const std::string& close_name, std::size_t open_offset,
                              NodeKind kind, const std::string& label) {
    TreeNode inner = ParseList();
    if (!IsCommand(Peek(), close_name)) {
      throw ParseError("expected '\\" + close_name + "'", open_offset);
    }
    Next();
    if (inner.kind == NodeKind::kGroup && inner.label == "list") {
      inner.label = label;
      inner.kind = kind;
      if (kind == NodeKind::kGroup) return inner;
    }
    return Node(kind, label, {std::move(inner)});
  }

  // Scripts on a function or big operator become leading children and are
  // recorded in the label (`log_`, `sum_^`), keeping serialization injective.
  TreeNode ParseScriptedOperator(const Token& cmd, NodeKind kind, bool product_body) {
    auto [sub, sup] = ParseScripts();
    std::string label = cmd.text;
    std::vector<TreeNode> children;
    if (sub) {
      label += "_";
      children.push_back(std::move(*sub));
    }
    if (sup) {
      label += "^";
      children.push_back(std::move(*sup));
    }
    const bool signed_or_abs = IsSymbol(Peek(), "-") || IsSymbol(Peek(), "|");
    if (!signed_or_abs && (AtOperandEnd() || !StartsImplicitOperand(Peek()))) {
      throw ParseError("missing argument for '\\" + cmd.text + "'", Peek().offset);
    }
    children.push_back(product_body ? ParseMultiplicative() : ParsePostfixOrSigned());
    return Node(kind, label, std::move(children));
  }

  TreeNode ParsePostfixOrSigned() {
    if (IsSymbol(Peek(), "-")) return ParseUnary();
    return ParsePostfix();
  }

  TreeNode ParsePrimary() {
    const Token t = Peek();
    switch (t.kind) {
      case Tok::kIdent:
        Next();
        return IdentLeaf(t);
      case Tok::kNumber:
        Next();
        return Leaf(NodeKind::kConstant, t.text);
      case Tok::kLBrace:
        return ParseBracedRequired();
      case Tok::kSymbol:
        if (t.text == "(" || t.text == "[") {
          Next();
          return ParseDelimited(t.text, t.offset);
        }
        if (t.text == "|") {
          Next();
          ++abs_depth_;
          if (IsSymbol(Peek(), "|")) throw ParseError("empty '|' group", t.offset);
          TreeNode inner = ParseList();
          --abs_depth_;
          if (!IsSymbol(Peek(), "|")) throw ParseError("unclosed '|'", t.offset);
          Next();
          return Node(NodeKind::kFunction, "abs", {std::move(inner)});
        }
        break;
      case Tok::kCommand:
        return ParseCommand();
      default:
        break;
    }
    if (t.kind == Tok::kEnd) throw ParseError("unexpected end of formula", t.offset);
    throw ParseError("unexpected '" + t.text + "'", t.offset);
  }

  TreeNode ParseCommand() {
    const Token cmd = Next();
    const std::string& n = cmd.text;
    if (GreekCommands().count(n)) return Leaf(NodeKind::kVariable, n);
    if (ConstantCommands().count(n)) return Leaf(NodeKind::kConstant, n);
    if (DotCommands().count(n)) return Leaf(NodeKind::kConstant, "dots");
    if (n == "frac" || n == "dfrac" || n == "tfrac" || n == "cfrac" || n == "binom" ||
        n == "dbinom" || n == "tbinom") {
      TreeNode num = ParseScriptArgument(cmd);
      TreeNode den = ParseScriptArgument(cmd);
      const bool binom = n.find("binom") != std::string::npos;
      return Node(NodeKind::kOperator, binom ? "binom" : "frac", {std::move(num), std::move(den)});
    }
    if (n == "sqrt") {
      if (IsSymbol(Peek(), "[")) {
        const Token open = Next();
        if (IsSymbol(Peek(), "]")) throw ParseError("empty root index", open.offset);
        TreeNode index = ParseList();
        if (!IsSymbol(Peek(), "]")) throw ParseError("unclosed root index", open.offset);
        Next();
        TreeNode radicand = ParseScriptArgument(cmd);
        return Node(NodeKind::kOperator, "root", {std::move(index), std::move(radicand)});
      }
      return Node(NodeKind::kOperator, "sqrt", {ParseScriptArgument(cmd)});
    }
    if (AccentCommands().count(n)) {
      return Node(NodeKind::kFunction, n, {ParseScriptArgument(cmd)});
    }
    if (FontCommands().count(n)) return ParseScriptArgument(cmd);
    if (n == "operatorname") {
      std::string name;
      const Token open = Peek();
      Expect(Tok::kLBrace, "", "'{' after \\operatorname");
      while (Peek().kind == Tok::kIdent || Peek().kind == Tok::kNumber) name += Next().text;
      Expect(Tok::kRBrace, "", "'}' closing \\operatorname");
      if (name.empty()) throw ParseError("empty argument", open.offset);
      Token named{Tok::kCommand, name, cmd.offset};
      return ParseScriptedOperator(named, NodeKind::kFunction, false);
    }
    if (NamedFunctions().count(n)) return ParseScriptedOperator(cmd, NodeKind::kFunction, false);
    if (BigOperators().count(n)) return ParseScriptedOperator(cmd, NodeKind::kOperator, true);
    if (n == "partial" || n == "nabla") {
      auto [sub, sup] = ParseScripts();
      std::string label = n;
      std::vector<TreeNode> children;
      if (sub) {
        label += "_";
        children.push_back(std::move(*sub));
      }
      if (sup) {
        label += "^";
        children.push_back(std::move(*sup));
      }
      if (AtOperandEnd() || !StartsImplicitOperand(Peek())) {
        // A bare differential symbol, e.g. inside \frac{\partial}{\partial x}.
        if (children.empty()) return Leaf(NodeKind::kConstant, n);
        return Node(NodeKind::kOperator, label, std::move(children));
      }
      children.push_back(ParsePostfix());
      return Node(NodeKind::kOperator, label, std::move(children));
    }
    if (n == "|") {
      ++abs_depth_;
      TreeNode inner = ParseList();
      --abs_depth_;
      if (!IsCommand(Peek(), "|")) throw ParseError("unclosed '\\|'", cmd.offset);
      Next();
      return Node(NodeKind::kFunction, "norm", {std::move(inner)});
    }
    if (n == "{") return ParseFencedCommand("}", cmd.offset, NodeKind::kGroup, "set");
    if (n == "langle") return ParseFencedCommand("rangle", cmd.offset, NodeKind::kGroup, "angle");
    if (n == "lfloor") return ParseFencedCommand("rfloor", cmd.offset, NodeKind::kFunction, "floor");
    if (n == "lceil") return ParseFencedCommand("rceil", cmd.offset, NodeKind::kFunction, "ceil");
    if (IsClosingCommand(n)) throw ParseError("unexpected '\\" + n + "'", cmd.offset);

    if (!options_.unknown_commands_as_functions) {
      throw ParseError("unknown command '\\" + n + "'", cmd.offset);
    }
    std::vector<TreeNode> args;
    while (Peek().kind == Tok::kLBrace) args.push_back(ParseBracedRequired());
    if (args.empty()) {
      if (AtOperandEnd() || !StartsImplicitOperand(Peek())) {
        throw ParseError("unknown command '\\" + n + "' has no argument", cmd.offset);
      }
      args.push_back(ParsePostfix());
    }
    return Node(NodeKind::kFunction, n, std::move(args));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int abs_depth_ = 0;
  const ParseOptions& options_;
};

}  // namespace

SemanticTree ParseLatex(std::string_view latex, const ParseOptions& options) {
  if (latex.empty()) throw ParseError("empty formula", 0);
  std::vector<Token> tokens = Tokenizer(latex).Run();
  CheckBraces(tokens);
  Parser parser(std::move(tokens), options);
  return SemanticTree{parser.ParseAll()};
}

}  // namespace fem::formula
