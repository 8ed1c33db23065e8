#include "fem/formula/mathml_parser.h"

#include <algorithm>
#include <cctype>
#include <string>
#include <unordered_map>
#include <vector>

#include "fem/common/errors.h"

namespace fem::formula {
namespace {

struct XmlNode {
  std::string name;
  std::unordered_map<std::string, std::string> attrs;
  std::vector<XmlNode> children;
  std::string text;  // character data, entity-decoded
  std::size_t offset = 0;
};

void AppendUtf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class XmlReader {
 public:
  explicit XmlReader(std::string_view src) : src_(src) {}

  XmlNode ReadDocument() {
    SkipMisc();
    if (pos_ >= src_.size() || src_[pos_] != '<') throw ParseError("expected '<'", pos_);
    XmlNode root = ReadElement();
    SkipMisc();
    if (pos_ != src_.size()) throw ParseError("trailing content after root element", pos_);
    return root;
  }

 private:
  void SkipSpace() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  // Whitespace, XML declaration, comments.
  void SkipMisc() {
    while (true) {
      SkipSpace();
      if (src_.compare(pos_, 5, "<?xml") == 0) {
        const auto end = src_.find("?>", pos_);
        if (end == std::string_view::npos) throw ParseError("unterminated declaration", pos_);
        pos_ = end + 2;
      } else if (src_.compare(pos_, 4, "<!--") == 0) {
        const auto end = src_.find("-->", pos_);
        if (end == std::string_view::npos) throw ParseError("unterminated comment", pos_);
        pos_ = end + 3;
      } else {
        return;
      }
    }
  }

  std::string ReadName() {
    const std::size_t start = pos_;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == ':' || c == '-' || c == '_' ||
          c == '.') {
        ++pos_;
      } else {
        break;
      }
    }
    if (start == pos_) throw ParseError("expected a name", start);
    std::string name(src_.substr(start, pos_ - start));
    const auto colon = name.find(':');
    if (colon != std::string::npos) name.erase(0, colon + 1);
    return name;
  }

  std::string DecodeEntity() {
    const std::size_t start = pos_;
    const auto semi = src_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 32) {
      throw ParseError("malformed entity", start);
    }
    const std::string_view body = src_.substr(pos_ + 1, semi - pos_ - 1);
    pos_ = semi + 1;
    std::string out;
    if (!body.empty() && body[0] == '#') {
      unsigned long cp = 0;
      try {
        cp = (body.size() > 1 && (body[1] == 'x' || body[1] == 'X'))
                 ? std::stoul(std::string(body.substr(2)), nullptr, 16)
                 : std::stoul(std::string(body.substr(1)), nullptr, 10);
      } catch (const std::exception&) {
        throw ParseError("malformed character reference", start);
      }
      AppendUtf8(out, cp);
      return out;
    }
    static const std::unordered_map<std::string_view, unsigned long> kNamed = {
        {"lt", '<'}, {"gt", '>'}, {"amp", '&'}, {"quot", '"'}, {"apos", '\''},
        {"minus", 0x2212}, {"PlusMinus", 0xB1}, {"times", 0xD7}, {"sdot", 0x22C5},
        {"InvisibleTimes", 0x2062}, {"it", 0x2062}, {"ApplyFunction", 0x2061},
        {"af", 0x2061}, {"le", 0x2264}, {"ge", 0x2265}, {"ne", 0x2260},
        {"infin", 0x221E}, {"sum", 0x2211}, {"prod", 0x220F}, {"int", 0x222B},
        {"partial", 0x2202}, {"nabla", 0x2207}, {"rarr", 0x2192}, {"pi", 0x3C0},
        {"alpha", 0x3B1}, {"beta", 0x3B2}, {"gamma", 0x3B3}, {"theta", 0x3B8},
        {"lambda", 0x3BB}, {"mu", 0x3BC}, {"sigma", 0x3C3}, {"prime", 0x2032},
        {"isin", 0x2208}, {"middot", 0xB7}};
    auto it = kNamed.find(body);
    if (it == kNamed.end()) throw ParseError("unknown entity '&" + std::string(body) + ";'", start);
    AppendUtf8(out, it->second);
    return out;
  }

  XmlNode ReadElement() {
    XmlNode node;
    node.offset = pos_;
    ++pos_;  // '<'
    node.name = ReadName();
    while (true) {
      SkipSpace();
      if (pos_ >= src_.size()) throw ParseError("unterminated tag", node.offset);
      if (src_[pos_] == '/') {
        if (pos_ + 1 >= src_.size() || src_[pos_ + 1] != '>') throw ParseError("expected '>'", pos_);
        pos_ += 2;
        return node;
      }
      if (src_[pos_] == '>') {
        ++pos_;
        break;
      }
      std::string key = ReadName();
      SkipSpace();
      if (pos_ >= src_.size() || src_[pos_] != '=') throw ParseError("expected '='", pos_);
      ++pos_;
      SkipSpace();
      if (pos_ >= src_.size() || (src_[pos_] != '"' && src_[pos_] != '\'')) {
        throw ParseError("expected quoted attribute value", pos_);
      }
      const char quote = src_[pos_++];
      std::string value;
      while (pos_ < src_.size() && src_[pos_] != quote) {
        if (src_[pos_] == '&') {
          value += DecodeEntity();
        } else {
          value += src_[pos_++];
        }
      }
      if (pos_ >= src_.size()) throw ParseError("unterminated attribute", node.offset);
      ++pos_;
      node.attrs[key] = value;
    }
    // Content.
    while (true) {
      if (pos_ >= src_.size()) throw ParseError("unclosed <" + node.name + ">", node.offset);
      if (src_.compare(pos_, 4, "<!--") == 0) {
        SkipMisc();
        continue;
      }
      if (src_.compare(pos_, 2, "</") == 0) {
        const std::size_t close = pos_;
        pos_ += 2;
        const std::string name = ReadName();
        SkipSpace();
        if (name != node.name) {
          throw ParseError("mismatched </" + name + "> for <" + node.name + ">", close);
        }
        if (pos_ >= src_.size() || src_[pos_] != '>') throw ParseError("expected '>'", pos_);
        ++pos_;
        return node;
      }
      if (src_[pos_] == '<') {
        node.children.push_back(ReadElement());
      } else if (src_[pos_] == '&') {
        node.text += DecodeEntity();
      } else {
        node.text += src_[pos_++];
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

const std::unordered_map<std::string, std::string>& SymbolMap() {
  static const std::unordered_map<std::string, std::string> k = {
      {"−", "-"}, {"×", "\\times "}, {"⋅", "\\cdot "},
      {"·", "\\cdot "}, {"⁢", " "}, {"⁡", " "}, {"⁤", "+"},
      {"∑", "\\sum "}, {"∏", "\\prod "}, {"∫", "\\int "},
      {"≤", "\\leq "}, {"≥", "\\geq "}, {"≠", "\\neq "},
      {"→", "\\to "}, {"∈", "\\in "}, {"±", "\\pm "},
      {"∓", "\\mp "}, {"∂", "\\partial "}, {"∇", "\\nabla "},
      {"∞", "\\infty "}, {"′", "'"}, {"∣", "|"}, {"‖", "\\|"},
      {"≈", "\\approx "}, {"≡", "\\equiv "}, {"∝", "\\propto "},
      {"∼", "\\sim "}, {"∘", "\\circ "}, {"⊗", "\\otimes "},
      {"⊕", "\\oplus "}, {"∩", "\\cap "}, {"∪", "\\cup "},
      {"⟨", "\\langle "}, {"⟩", "\\rangle "}, {"⌊", "\\lfloor "},
      {"⌋", "\\rfloor "}, {"⌈", "\\lceil "}, {"⌉", "\\rceil "},
      {"{", "\\{"}, {"}", "\\}"}, {"…", "\\ldots "}, {"⋯", "\\cdots "},
      {"÷", "\\div "}, {"⇒", "\\implies "}, {"⊂", "\\subset "},
      {"⊆", "\\subseteq "}, {"∀", "\\forall "}, {"∃", "\\exists "},
      {"α", "\\alpha "}, {"β", "\\beta "}, {"γ", "\\gamma "},
      {"δ", "\\delta "}, {"ε", "\\epsilon "}, {"ζ", "\\zeta "},
      {"η", "\\eta "}, {"θ", "\\theta "}, {"ι", "\\iota "},
      {"κ", "\\kappa "}, {"λ", "\\lambda "}, {"μ", "\\mu "},
      {"ν", "\\nu "}, {"ξ", "\\xi "}, {"π", "\\pi "},
      {"ρ", "\\rho "}, {"σ", "\\sigma "}, {"τ", "\\tau "},
      {"υ", "\\upsilon "}, {"φ", "\\phi "}, {"ϕ", "\\phi "},
      {"χ", "\\chi "}, {"ψ", "\\psi "}, {"ω", "\\omega "},
      {"Γ", "\\Gamma "}, {"Δ", "\\Delta "}, {"Θ", "\\Theta "},
      {"Λ", "\\Lambda "}, {"Ξ", "\\Xi "}, {"Π", "\\Pi "},
      {"Σ", "\\Sigma "}, {"Φ", "\\Phi "}, {"Ψ", "\\Psi "},
      {"Ω", "\\Omega "}};
  return k;
}

// Letters-only tokens that name a LaTeX command (sin, lim, max, ...).
bool IsCommandWord(const std::string& s) {
  static const std::unordered_map<std::string, bool> k = {
      {"sin", true}, {"cos", true}, {"tan", true}, {"cot", true}, {"sec", true},
      {"csc", true}, {"log", true}, {"ln", true}, {"lg", true}, {"exp", true},
      {"det", true}, {"dim", true}, {"arg", true}, {"max", true}, {"min", true},
      {"sup", true}, {"inf", true}, {"lim", true}, {"sinh", true}, {"cosh", true},
      {"tanh", true}, {"arcsin", true}, {"arccos", true}, {"arctan", true},
      {"gcd", true}, {"Pr", true}, {"argmax", true}, {"argmin", true},
      {"limsup", true}, {"liminf", true}, {"tr", true}, {"ker", true},
      {"deg", true}, {"erf", true}, {"var", true}, {"Var", true}, {"cov", true},
      {"Cov", true}, {"sgn", true}, {"diag", true}, {"rank", true}};
  return k.count(s) > 0;
}

std::string TranslateToken(const std::string& raw) {
  const std::string t = Trim(raw);
  if (t.empty()) return " ";
  auto it = SymbolMap().find(t);
  if (it != SymbolMap().end()) return it->second;
  if (IsCommandWord(t)) return "\\" + t + " ";
  std::string out;
  std::size_t i = 0;
  while (i < t.size()) {
    const unsigned char c = static_cast<unsigned char>(t[i]);
    std::size_t len = 1;
    if (c >= 0xF0) len = 4;
    else if (c >= 0xE0) len = 3;
    else if (c >= 0xC0) len = 2;
    const std::string ch = t.substr(i, len);
    auto sym = SymbolMap().find(ch);
    if (sym != SymbolMap().end()) {
      out += sym->second;
    } else if (ch == "{" || ch == "}") {
      out += "\\" + ch;
    } else {
      out += ch;
      out += ' ';
    }
    i += len;
  }
  return out;
}

class Translator {
 public:
  std::string Translate(const XmlNode& n) {
    const std::string& tag = n.name;
    if (tag == "math" || tag == "mrow" || tag == "mstyle" || tag == "mpadded" ||
        tag == "merror") {
      return "{" + Children(n) + "}";
    }
    if (tag == "semantics") {
      if (n.children.empty()) throw ParseError("empty <semantics>", n.offset);
      return Translate(n.children.front());
    }
    if (tag == "mi" || tag == "mn" || tag == "mo") return TranslateToken(n.text);
    if (tag == "mtext" || tag == "mspace" || tag == "annotation" ||
        tag == "annotation-xml" || tag == "mphantom" || tag == "none") {
      return " ";
    }
    if (tag == "mfrac") return "\\frac" + Arg(n, 0) + Arg(n, 1);
    if (tag == "msqrt") return "\\sqrt{" + Children(n) + "}";
    if (tag == "mroot") return "\\sqrt[" + Translate(Child(n, 1)) + "]" + Arg(n, 0);
    if (tag == "msup") return Arg(n, 0) + "^" + Arg(n, 1);
    if (tag == "msub") return Arg(n, 0) + "_" + Arg(n, 1);
    if (tag == "msubsup") return Arg(n, 0) + "_" + Arg(n, 1) + "^" + Arg(n, 2);
    if (tag == "munder" || tag == "mover" || tag == "munderover") return UnderOver(n);
    if (tag == "mfenced") return Fenced(n);
    if (tag == "mtable" || tag == "mtr" || tag == "mtd") {
      std::string out;
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += ",";
        out += Translate(n.children[i]);
      }
      return "{" + out + "}";
    }
    throw ParseError("unsupported MathML element <" + tag + ">", n.offset);
  }

 private:
  std::string Children(const XmlNode& n) {
    std::string out;
    for (const auto& c : n.children) out += Translate(c);
    return out;
  }

  const XmlNode& Child(const XmlNode& n, std::size_t i) {
    if (i >= n.children.size()) {
      throw ParseError("<" + n.name + "> is missing argument " + std::to_string(i + 1), n.offset);
    }
    return n.children[i];
  }

  std::string Arg(const XmlNode& n, std::size_t i) { return "{" + Translate(Child(n, i)) + "}"; }

  std::string UnderOver(const XmlNode& n) {
    const XmlNode& base = Child(n, 0);
    const std::string base_text = base.name == "mo" ? Trim(base.text) : std::string();
    if (n.name == "mover" && base.name != "mo") {
      const XmlNode& accent = Child(n, 1);
      const std::string a = Trim(accent.text);
      static const std::unordered_map<std::string, std::string> kAccents = {
          {"^", "hat"}, {"ˆ", "hat"}, {"¯", "bar"}, {"‾", "overline"},
          {"~", "tilde"}, {"˜", "tilde"}, {"→", "vec"}, {"⃗", "vec"},
          {"˙", "dot"}, {".", "dot"}, {"¨", "ddot"}};
      auto it = kAccents.find(a);
      if (accent.name == "mo" && it != kAccents.end()) {
        return "\\" + it->second + Arg(n, 0);
      }
    }
    std::string out = Translate(base);
    if (n.name == "munder") return out + "_" + Arg(n, 1);
    if (n.name == "mover") return out + "^" + Arg(n, 1);
    return out + "_" + Arg(n, 1) + "^" + Arg(n, 2);
  }

  std::string Fenced(const XmlNode& n) {
    auto attr = [&](const char* key, const char* fallback) {
      auto it = n.attrs.find(key);
      return it == n.attrs.end() ? std::string(fallback) : it->second;
    };
    auto delim = [](const std::string& d) -> std::string {
      if (d == "{") return "\\{";
      if (d == "}") return "\\}";
      if (d == "⟨") return "\\langle ";
      if (d == "⟩") return "\\rangle ";
      if (d == "‖") return "\\|";
      return d;
    };
    const std::string open = delim(attr("open", "("));
    const std::string close = delim(attr("close", ")"));
    std::string separators = attr("separators", ",");
    separators.erase(std::remove_if(separators.begin(), separators.end(),
                                    [](char c) { return std::isspace(static_cast<unsigned char>(c)); }),
                     separators.end());
    std::string out = open;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (i) {
        const std::size_t k = std::min(i - 1, separators.empty() ? 0 : separators.size() - 1);
        out += separators.empty() ? std::string(" ") : std::string(1, separators[k]);
      }
      out += Translate(n.children[i]);
    }
    return out + close;
  }
};

}  // namespace

std::string MathMLToLatex(std::string_view mathml) {
  XmlNode root = XmlReader(mathml).ReadDocument();
  return Translator().Translate(root);
}

SemanticTree ParseMathML(std::string_view mathml, const ParseOptions& options) {
  if (mathml.empty()) throw ParseError("empty formula", 0);
  return ParseLatex(MathMLToLatex(mathml), options);
}

SemanticTree ParseFormula(std::string_view text, const ParseOptions& options) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '<') return ParseMathML(text, options);
  return ParseLatex(text, options);
}

}  // namespace fem::formula
