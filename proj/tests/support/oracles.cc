#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

namespace fem::testing {

using formula::NodeKind;
using formula::TreeNode;

formula::TreeNode RandomTree(Rng& rng, int max_depth) {
  std::uniform_int_distribution<int> coin(0, 99);
  const char* vars[] = {"x", "y", "z", "a", "b"};
  const char* consts[] = {"1", "2", "n0"};
  const char* ops[] = {"+", "*", "=", "^", "_", "frac"};
  const char* funcs[] = {"sin", "log", "f"};
  std::function<TreeNode(int)> make = [&](int depth) -> TreeNode {
    const bool leaf = depth >= max_depth || coin(rng) < 30 + 10 * depth;
    if (leaf) {
      if (coin(rng) < 65) return formula::Leaf(NodeKind::kVariable, vars[rng() % 5]);
      return formula::Leaf(NodeKind::kConstant, consts[rng() % 3]);
    }
    const int pick = coin(rng);
    NodeKind kind = pick < 70 ? NodeKind::kOperator : pick < 90 ? NodeKind::kFunction : NodeKind::kGroup;
    std::string label = kind == NodeKind::kOperator   ? ops[rng() % 6]
                        : kind == NodeKind::kFunction ? funcs[rng() % 3]
                                                      : "group";
    const std::size_t arity = kind == NodeKind::kFunction ? 1 + rng() % 2 : 2 + rng() % 2;
    std::vector<TreeNode> children;
    for (std::size_t i = 0; i < arity; ++i) children.push_back(make(depth + 1));
    return formula::Node(kind, std::move(label), std::move(children));
  };
  return make(1);
}

namespace {

std::string Render(const TreeNode& n, bool generalize) {
  if (n.children.empty()) {
    if (generalize && n.kind == NodeKind::kVariable) return "*_v";
    if (generalize && n.kind == NodeKind::kConstant) return "*_c";
    return n.label;
  }
  std::string s = n.label + "(";
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    if (i) s += ",";
    s += Render(n.children[i], generalize);
  }
  return s + ")";
}

}  // namespace

std::vector<formula::FormulaTerm> BruteForceTerms(const formula::TreeNode& root) {
  // Breadth-first over (node, level) pairs with an explicit queue.
  std::vector<std::pair<const TreeNode*, int>> queue{{&root, 1}};
  std::vector<formula::FormulaTerm> out;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto [node, level] = queue[head];
    if (node->children.empty()) continue;
    out.push_back({Render(*node, false), formula::TermKind::kOriginal, level});
    out.push_back({Render(*node, true), formula::TermKind::kGeneralized, level});
    for (const auto& c : node->children) queue.emplace_back(&c, level + 1);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t BruteForceComplexity(const formula::TreeNode& root) {
  std::uint64_t total = 0;
  for (const auto& t : BruteForceTerms(root)) total += static_cast<std::uint64_t>(t.level);
  return total;
}

formula::TermSet RandomTermSet(Rng& rng, const std::string& tag, std::size_t size) {
  formula::TermSet s;
  for (std::size_t i = 0; i < size; ++i) {
    const auto kind = rng() % 2 ? formula::TermKind::kOriginal : formula::TermKind::kGeneralized;
    s.terms.push_back({tag + "t" + std::to_string(rng() % 6), kind, 1 + static_cast<int>(rng() % 4)});
  }
  s.source_node_count = size;
  return s;
}

std::vector<double> DensePageRank(std::size_t n, const std::vector<graph::WeightedEdge>& edges, double damping,
                                  const std::vector<double>& teleport) {
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (const auto& e : edges) w[e.src][e.dst] += e.weight;
  std::vector<double> tele = teleport.empty() ? std::vector<double>(n, 1.0) : teleport;
  const double tsum = std::accumulate(tele.begin(), tele.end(), 0.0);
  for (double& t : tele) t /= tsum;
  // Column-stochastic matrix M with dangling columns replaced by teleport.
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    const double out = std::accumulate(w[j].begin(), w[j].end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) m[i][j] = out > 0.0 ? w[j][i] / out : tele[i];
  }
  std::vector<double> x(tele), next(n);
  for (int it = 0; it < 100000; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += m[i][j] * x[j];
      next[i] = damping * s + (1.0 - damping) * tele[i];
    }
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) delta += std::abs(next[i] - x[i]);
    x.swap(next);
    if (delta < 1e-15) break;
  }
  return x;
}

std::vector<graph::WeightedEdge> RandomEdges(Rng& rng, std::size_t n, double density) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<graph::WeightedEdge> edges;
  for (graph::VertexId a = 0; a < n; ++a) {
    if (u(rng) < 0.1) continue;  // dangling
    for (graph::VertexId b = 0; b < n; ++b) {
      if (a != b && u(rng) < density) edges.push_back({a, b, 0.05 + u(rng)});
    }
  }
  return edges;
}

std::map<graph::VertexId, int> RelaxationDistances(std::size_t n,
                                                   const std::vector<std::pair<graph::VertexId, graph::VertexId>>& arcs,
                                                   graph::VertexId source, int max_depth) {
  constexpr int kFar = 1 << 20;
  std::vector<int> d(n, kFar);
  d[source] = 0;
  for (std::size_t round = 0; round < n; ++round) {
    bool changed = false;
    for (const auto& [a, b] : arcs) {
      if (d[a] + 1 < d[b]) d[b] = d[a] + 1, changed = true;
      if (d[b] + 1 < d[a]) d[a] = d[b] + 1, changed = true;
    }
    if (!changed) break;
  }
  std::map<graph::VertexId, int> out;
  for (graph::VertexId v = 0; v < n; ++v) {
    if (d[v] <= max_depth) out[v] = d[v];
  }
  return out;
}

double EnumerateTours(const recsys::HetGraph& graph, graph::VertexId start, graph::VertexId end,
                      const std::vector<recsys::EdgeType>& path) {
  const auto edges = graph.Edges();
  std::function<double(graph::VertexId, std::size_t)> walk = [&](graph::VertexId at, std::size_t step) -> double {
    if (step == path.size()) return at == end ? 1.0 : 0.0;
    double total = 0.0;
    for (const auto& e : edges) {
      if (e.type == path[step] && e.src == at) total += e.weight * walk(e.dst, step + 1);
    }
    return total;
  };
  return walk(start, 0);
}

recsys::HetGraph RandomHetGraph(Rng& rng, std::size_t max_vertices) {
  using recsys::EdgeType;
  using recsys::VertexType;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<recsys::HetVertex> vertices;
  const std::size_t n = 5 + rng() % (max_vertices - 4);
  for (std::size_t i = 0; i < n; ++i) {
    const auto type = static_cast<VertexType>(i < 5 ? i : rng() % 5);
    vertices.push_back({type, "v" + std::to_string(i), ""});
  }
  std::vector<recsys::HetEdge> edges;
  for (std::size_t t = 0; t < recsys::kEdgeTypeCount; ++t) {
    const auto type = static_cast<EdgeType>(t);
    for (graph::VertexId a = 0; a < n; ++a) {
      if (vertices[a].type != recsys::SourceType(type)) continue;
      for (graph::VertexId b = 0; b < n; ++b) {
        if (a == b || vertices[b].type != recsys::TargetType(type)) continue;
        if (u(rng) < 0.6) edges.push_back({type, a, b, 0.1 + u(rng)});
      }
    }
  }
  return recsys::HetGraph(std::move(vertices), std::move(edges));
}

FilterCounts WalkCounts(const formula::TreeNode& root) {
  std::set<std::string> variables;
  std::size_t operators = 0;
  std::vector<const formula::TreeNode*> stack{&root};
  while (!stack.empty()) {
    const formula::TreeNode* n = stack.back();
    stack.pop_back();
    if (n->kind == formula::NodeKind::kVariable) variables.insert(n->label);
    if (n->kind == formula::NodeKind::kOperator || n->kind == formula::NodeKind::kFunction) ++operators;
    for (const auto& c : n->children) stack.push_back(&c);
  }
  return {variables.size(), operators};
}

DirectMetrics ComputeDirectMetrics(const std::vector<recsys::Rating>& ranked) {
  auto gain = [](recsys::Rating r) { return r == recsys::Rating::kGood ? 2.0 : r == recsys::Rating::kOK ? 1.0 : 0.0; };
  auto rel = [](recsys::Rating r) { return r != recsys::Rating::kBad; };
  auto dcg = [&](const std::vector<recsys::Rating>& list, std::size_t k) {
    double s = 0.0;
    for (std::size_t i = 0; i < std::min(k, list.size()); ++i) s += gain(list[i]) / std::log2(static_cast<double>(i) + 2.0);
    return s;
  };
  auto ideal = ranked;
  std::sort(ideal.begin(), ideal.end(), [&](auto a, auto b) { return gain(a) > gain(b); });
  auto ndcg = [&](std::size_t k) {
    const double i = dcg(ideal, k);
    return i == 0.0 ? 0.0 : dcg(ranked, k) / i;
  };
  auto prec = [&](std::size_t k) {
    double hits = 0.0;
    for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) hits += rel(ranked[i]);
    return hits / static_cast<double>(k);
  };
  DirectMetrics m{};
  m.ndcg3 = ndcg(3);
  m.ndcg5 = ndcg(5);
  m.ndcg_all = ndcg(ranked.size());
  m.p3 = prec(3);
  m.p5 = prec(5);
  double hits = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (!rel(ranked[i])) continue;
    hits += 1.0;
    sum += hits / static_cast<double>(i + 1);
    if (m.rr == 0.0) m.rr = 1.0 / static_cast<double>(i + 1);
  }
  m.ap = hits == 0.0 ? 0.0 : sum / hits;
  return m;
}

std::vector<recsys::RankingRequest> PlantedRequests(Rng& rng, const std::vector<double>& planted,
                                                    std::size_t requests, std::size_t items) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<recsys::RankingRequest> out;
  for (std::size_t r = 0; r < requests; ++r) {
    recsys::RankingRequest req;
    req.request_id = "r" + std::to_string(1000 + r);
    double best = -1e300;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < items; ++i) {
      recsys::RankingItem item;
      item.oer_id = "o" + std::to_string(100 + i);
      double s = 0.0;
      for (double w : planted) {
        item.features.push_back(u(rng));
        s += w * item.features.back();
      }
      if (s > best) best = s, best_i = i;
      req.items.push_back(std::move(item));
    }
    req.items[best_i].rating = recsys::Rating::kGood;
    out.push_back(std::move(req));
  }
  return out;
}

}  // namespace fem::testing
