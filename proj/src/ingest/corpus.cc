#include "fem/ingest/corpus.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "fem/common/errors.h"
#include "fem/common/hash.h"
#include "fem/common/jsonl.h"
#include "fem/common/log.h"
#include "fem/formula/mathml_parser.h"

namespace fem::ingest {
namespace {

bool IsSpace(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

// Word boundaries of `text` as [begin, end) pairs.
std::vector<std::pair<std::size_t, std::size_t>> Words(const std::string& text) {
  std::vector<std::pair<std::size_t, std::size_t>> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    const std::size_t b = i;
    while (i < text.size() && !IsSpace(text[i])) ++i;
    if (i > b) words.emplace_back(b, i);
  }
  return words;
}

std::size_t Utf8Floor(const std::string& s, std::size_t pos) {
  while (pos > 0 && pos < s.size() && (static_cast<unsigned char>(s[pos]) & 0xC0) == 0x80) --pos;
  return pos;
}

std::string CollapseSpaces(std::string_view s) {
  std::string out;
  bool pending = false;
  for (char c : s) {
    if (IsSpace(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out += ' ';
    pending = false;
    out += c;
  }
  return out;
}

struct PageResult {
  std::vector<RawFormula> formulas;
  std::size_t spans = 0;
  std::size_t skipped = 0;
  std::size_t duplicates = 0;
};

PageResult ProcessPage(const WikiPage& page, const IngestOptions& options) {
  PageResult result;
  const SplitBody split = SplitMath(page.body);
  std::set<std::string> seen;
  for (const auto& span : split.spans) {
    ++result.spans;
    formula::SemanticTree tree;
    try {
      if (span.latex.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw ParseError("empty math span", 0);
      }
      tree = formula::ParseFormula(span.latex);
    } catch (const ParseError& e) {
      ++result.skipped;
      log::Warning("page " + page.id + ": skipped math span: " + e.what());
      continue;
    }
    std::string canonical = formula::Serialize(tree.root);
    if (!seen.insert(canonical).second) {
      ++result.duplicates;
      continue;
    }
    RawFormula f;
    f.id = FormulaId(page.id, canonical);
    f.latex = span.latex;
    f.canonical = std::move(canonical);
    f.home_pages = {page.id};
    f.context = ContextWindow(split.text, span.text_offset, options);
    f.variable_count = formula::CountVariables(tree.root);
    f.operator_count = formula::CountOperators(tree.root);
    result.formulas.push_back(std::move(f));
  }
  return result;
}

}  // namespace

std::string DecodeEntities(std::string_view text) {
  static const std::map<std::string_view, std::string_view> kEntities = {
      {"lt", "<"}, {"gt", ">"}, {"amp", "&"}, {"quot", "\""}, {"apos", "'"}, {"nbsp", " "}};
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '&') {
      const auto semi = text.find(';', i);
      if (semi != std::string_view::npos && semi - i <= 8) {
        auto it = kEntities.find(text.substr(i + 1, semi - i - 1));
        if (it != kEntities.end()) {
          out += it->second;
          i = semi + 1;
          continue;
        }
      }
    }
    out += text[i++];
  }
  return out;
}

SplitBody SplitMath(const std::string& body) {
  SplitBody out;
  std::size_t pos = 0;
  while (pos < body.size()) {
    const auto open = body.find("<math", pos);
    if (open == std::string::npos) {
      out.text.append(body, pos, std::string::npos);
      break;
    }
    const char after = open + 5 < body.size() ? body[open + 5] : '\0';
    if (after != '>' && !IsSpace(after)) {  // e.g. <mathematics>
      out.text.append(body, pos, open + 5 - pos);
      pos = open + 5;
      continue;
    }
    out.text.append(body, pos, open - pos);
    out.text += ' ';
    const auto tag_end = body.find('>', open);
    const auto close = tag_end == std::string::npos ? std::string::npos : body.find("</math>", tag_end);
    if (close == std::string::npos) {
      out.spans.push_back({std::string(), out.text.size()});
      break;
    }
    out.spans.push_back(
        {DecodeEntities(std::string_view(body).substr(tag_end + 1, close - tag_end - 1)), out.text.size()});
    out.text += ' ';
    pos = close + 7;
  }
  return out;
}

std::string ContextWindow(const std::string& text, std::size_t offset, const IngestOptions& options) {
  const std::size_t before_budget = options.context_window / 2;
  const std::size_t after_budget = options.context_window - before_budget;
  offset = std::min(offset, text.size());
  if (options.context_unit == ContextUnit::kCharacters) {
    const std::size_t b = Utf8Floor(text, offset >= before_budget ? offset - before_budget : 0);
    const std::size_t e = Utf8Floor(text, std::min(text.size(), offset + after_budget));
    std::string window = text.substr(b, offset - b) + text.substr(offset, e - offset);
    std::string collapsed = CollapseSpaces(window);
    if (collapsed.size() > options.context_window) collapsed.resize(Utf8Floor(collapsed, options.context_window));
    return collapsed;
  }
  const auto words = Words(text);
  // First word starting at or after the span.
  const auto split = std::lower_bound(words.begin(), words.end(), offset,
                                      [](const auto& w, std::size_t off) { return w.first < off; });
  const auto first = split - std::min<std::ptrdiff_t>(split - words.begin(), before_budget);
  const auto last = split + std::min<std::ptrdiff_t>(words.end() - split, after_budget);
  std::string out;
  for (auto it = first; it != last; ++it) {
    if (!out.empty()) out += ' ';
    out.append(text, it->first, it->second - it->first);
  }
  return out;
}

std::string FormulaId(const std::string& page_id, const std::string& canonical) {
  return ToHex(Fnv1a64(page_id + '\x1f' + canonical));
}

Corpus ParseCorpus(std::istream& in, const IngestOptions& options) {
  std::vector<WikiPage> pages;
  std::map<std::string, std::size_t> line_of;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    jsonl::Json record;
    try {
      record = jsonl::Json::parse(line);
    } catch (const jsonl::Json::parse_error& e) {
      throw CorpusFormatError(std::string("invalid JSON: ") + e.what(), line_number);
    }
    if (!record.is_object()) throw CorpusFormatError("record is not a JSON object", line_number);
    WikiPage page;
    page.id = jsonl::RequireId(record, "id", line_number);
    page.title = jsonl::OptionalString(record, "title");
    auto text = record.find("text");
    if (text == record.end() || !text->is_string()) {
      throw CorpusFormatError("missing string field \"text\"", line_number);
    }
    page.body = text->get<std::string>();
    page.outlinks = jsonl::StringList(record, "links", line_number);
    if (!line_of.emplace(page.id, line_number).second) {
      throw CorpusFormatError("duplicate page id \"" + page.id + "\"", line_number);
    }
    pages.push_back(std::move(page));
  }
  if (pages.empty()) throw EmptyCorpusError("corpus contains no pages");

  Corpus corpus;
  for (auto& page : pages) {
    std::vector<std::string> kept;
    std::set<std::string> unique;
    for (auto& link : page.outlinks) {
      if (link == page.id || !unique.insert(link).second) continue;
      if (line_of.count(link)) {
        kept.push_back(link);
      } else {
        ++corpus.dropped_links;
        log::Warning("page " + page.id + ": dropped link to unknown page " + link);
      }
    }
    std::sort(kept.begin(), kept.end());
    page.outlinks = std::move(kept);
  }

  std::vector<PageResult> results(pages.size());
  const std::size_t n = pages.size();
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t i = 0; i < n; ++i) results[i] = ProcessPage(pages[i], options);

  for (auto& r : results) {
    corpus.math_spans += r.spans;
    corpus.skipped_spans += r.skipped;
    corpus.duplicate_spans += r.duplicates;
    for (auto& f : r.formulas) corpus.formulas.push_back(std::move(f));
  }
  std::sort(corpus.formulas.begin(), corpus.formulas.end(),
            [](const RawFormula& a, const RawFormula& b) { return a.id < b.id; });
  std::sort(pages.begin(), pages.end(),
            [](const WikiPage& a, const WikiPage& b) { return a.id < b.id; });
  corpus.pages = std::move(pages);
  return corpus;
}

Corpus LoadCorpus(const std::filesystem::path& path, const IngestOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError("cannot open corpus " + path.string());
  return ParseCorpus(in, options);
}

std::vector<RawFormula> FilterFormulas(const std::vector<RawFormula>& formulas, const FilterRule& rule) {
  std::vector<RawFormula> kept;
  for (const auto& f : formulas) {
    if (f.variable_count >= rule.min_variables && f.operator_count >= rule.min_operators) {
      kept.push_back(f);
    }
  }
  return kept;
}

}  // namespace fem::ingest
