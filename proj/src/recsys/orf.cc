#include "fem/recsys/orf.h"

#include <algorithm>

#include "fem/common/errors.h"
#include "fem/kernels/text_kernels.h"

namespace fem::recsys {
namespace {

constexpr std::string_view kTextNames[] = {"lm:context", "lm:abstract", "lm:keywords", "lm:topics"};
constexpr std::size_t kTextCount = std::size(kTextNames);
constexpr std::size_t kNoResource = static_cast<std::size_t>(-1);

std::string TypeName(OerType t) { return "type:" + std::string(OerTypeName(t)); }

}  // namespace

OrfConfig OrfConfig::Default() {
  OrfConfig c;
  for (const char* spec : {"FR", "FK-KR", "FF-FR", "FK-KKco-KR", "FF-FK-KR", "FF-FF-FR"}) {
    c.templates.push_back(ParseMetaPath(spec));
  }
  return c;
}

OrfConfig OrfConfig::FromNames(const std::vector<std::string>& names) {
  OrfConfig c;
  c.text_features = false;
  c.type_indicators = false;
  std::size_t i = 0;
  while (i < names.size() && names[i].find(':') == std::string::npos) {
    c.templates.push_back(ParseMetaPath(names[i++]));
  }
  if (i < names.size() && names[i] == kTextNames[0]) {
    c.text_features = true;
    i += kTextCount;
  }
  if (i < names.size() && names[i].starts_with("type:")) {
    c.type_indicators = true;
    i += kOerTypeCount;
  }
  if (c.Names() != names) throw SchemaError("unrecognized ranking feature list");
  return c;
}

std::size_t OrfConfig::size() const {
  return templates.size() + (text_features ? kTextCount : 0) + (type_indicators ? kOerTypeCount : 0);
}

std::vector<std::string> OrfConfig::Names() const {
  std::vector<std::string> out;
  for (const auto& t : templates) out.push_back(MetaPathName(t));
  if (text_features) {
    for (auto n : kTextNames) out.emplace_back(n);
  }
  if (type_indicators) {
    for (std::size_t t = 0; t < kOerTypeCount; ++t) out.push_back(TypeName(static_cast<OerType>(t)));
  }
  return out;
}

OrfExtractor::OrfExtractor(const HetGraph& graph, const std::vector<Oer>& oers, const map::FemGraph& fem,
                           OrfConfig config, double mu)
    : graph_(graph), fem_(fem), config_(std::move(config)), oers_(oers), texts_(mu) {
  for (const auto& t : config_.templates) {
    if (t.empty() || SourceType(t.front()) != VertexType::kFormula ||
        TargetType(t.back()) != VertexType::kResource) {
      throw SchemaError("ranking template " + MetaPathName(t) + " must lead from a formula to a resource");
    }
  }
  if (graph_.OfType(VertexType::kResource).size() != oers_.size()) {
    throw SchemaError("resource catalog does not match the graph");
  }
  resource_of_vertex_.assign(graph_.vertex_count(), kNoResource);
  for (std::size_t r = 0; r < oers_.size(); ++r) {
    const VertexId v = graph_.Require(VertexType::kResource, oers_[r].id);
    resource_vertex_.push_back(v);
    resource_of_vertex_[v] = r;
    resource_index_.emplace(oers_[r].id, r);
    texts_.AddDocument(oers_[r].Text());
  }
}

std::size_t OrfExtractor::ResourceIndex(const std::string& oer_id) const {
  auto it = resource_index_.find(oer_id);
  if (it == resource_index_.end()) throw UnknownVertexError("unknown resource " + oer_id);
  return it->second;
}

std::vector<double> OrfExtractor::Posterior(std::string_view text) const {
  const auto query = texts_.MakeQuery(text);
  if (query.empty()) return std::vector<double>(oers_.size(), 0.0);
  return text::Posterior(kernels::LogLikelihoodsSerial(texts_, query));
}

std::vector<double> OrfExtractor::PhraseSum(const std::vector<std::string>& phrases) const {
  std::vector<double> total(oers_.size(), 0.0);
  for (const auto& p : phrases) {
    const auto post = Posterior(p);
    for (std::size_t r = 0; r < total.size(); ++r) total[r] += post[r];
  }
  return total;
}

QueryTextFeatures OrfExtractor::QueryText(std::string_view abstract, const std::vector<std::string>& keywords,
                                          const std::vector<std::string>& topics) const {
  if (!config_.text_features) return {};
  return {Posterior(abstract), PhraseSum(keywords), PhraseSum(topics)};
}

std::vector<double> OrfExtractor::FormulaBlock(graph::VertexId fem_vertex, const QueryTextFeatures& query) const {
  const std::size_t k = size();
  const std::size_t resources = oers_.size();
  std::vector<double> block(resources * k, 0.0);
  const auto& formula = fem_.vertex(fem_vertex);
  const auto het = graph_.Find(VertexType::kFormula, formula.id);

  std::size_t slot = 0;
  for (const auto& path : config_.templates) {
    if (het) {
      const auto reach = MetapathReach(graph_, *het, path);
      for (VertexId v = 0; v < reach.size(); ++v) {
        if (reach[v] != 0.0 && resource_of_vertex_[v] != kNoResource) {
          block[resource_of_vertex_[v] * k + slot] = reach[v];
        }
      }
    }
    ++slot;
  }
  if (config_.text_features) {
    const auto context = Posterior(formula.context);
    auto put = [&](std::size_t s, const std::vector<double>& values) {
      for (std::size_t r = 0; r < std::min(values.size(), resources); ++r) block[r * k + s] = values[r];
    };
    put(slot, context);
    put(slot + 1, query.abstract);
    put(slot + 2, query.keywords);
    put(slot + 3, query.topics);
    slot += kTextCount;
  }
  if (config_.type_indicators) {
    for (std::size_t r = 0; r < resources; ++r) {
      block[r * k + slot + static_cast<std::size_t>(oers_[r].type)] = 1.0;
    }
  }
  return block;
}

std::vector<double> OrfExtractor::Features(const std::string& formula_id, const std::string& oer_id,
                                           const QueryTextFeatures& query) const {
  const auto block = FormulaBlock(fem_.Require(formula_id), query);
  const std::size_t r = ResourceIndex(oer_id);
  return {block.begin() + static_cast<std::ptrdiff_t>(r * size()),
          block.begin() + static_cast<std::ptrdiff_t>((r + 1) * size())};
}

}  // namespace fem::recsys
