#include "namecf/pagerank.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "namecf/error.hpp"

namespace namecf {

void PRConfig::validate() const {
  if (!(damping > 0.0 && damping < 1.0)) throw UsageError("PageRank: damping must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw UsageError("PageRank: epsilon must be positive");
  if (max_iter < 1) throw UsageError("PageRank: max_iter must be at least 1");
}

namespace {

struct Adjacency {
  std::uint32_t to;
  double weight;
};

void fill_csr(const std::vector<std::vector<Adjacency>>& rows,
              std::vector<std::uint32_t>& offsets, std::vector<std::uint32_t>& cols,
              std::vector<double>& weights) {
  offsets.assign(1, 0);
  for (const auto& row : rows) {
    for (const auto& a : row) {
      cols.push_back(a.to);
      weights.push_back(a.weight);
    }
    offsets.push_back(static_cast<std::uint32_t>(cols.size()));
  }
}

}  // namespace

Graph Graph::from_bag(const CooccurrenceBag& bag) {
  Graph g;
  std::vector<std::uint32_t> vertex_of(bag.name_count(), 0);
  for (NameId i = 0; i < bag.name_count(); ++i) {
    if (bag.entry(i).empty()) continue;
    vertex_of[i] = static_cast<std::uint32_t>(g.names_.size());
    g.names_.push_back(bag.name(i));
  }
  std::vector<std::vector<Adjacency>> rows;
  rows.reserve(g.names_.size());
  for (NameId i = 0; i < bag.name_count(); ++i) {
    auto entry = bag.entry(i);
    if (entry.empty()) continue;
    auto& row = rows.emplace_back();
    for (const auto& c : entry) row.push_back({vertex_of[c.name], static_cast<double>(c.multiplicity)});
    std::sort(row.begin(), row.end(), [](const Adjacency& a, const Adjacency& b) { return a.to < b.to; });
  }
  fill_csr(rows, g.offsets_, g.cols_, g.weights_);
  return g;
}

Graph Graph::from_edges(std::vector<std::string> vertices, std::span<const WeightedEdge> edges) {
  Graph g;
  for (const auto& e : edges) {
    if (e.a == e.b) throw UsageError("graph: self-loop on '" + e.a + "'");
    if (!(e.weight > 0.0)) throw UsageError("graph: edge weights must be positive");
    vertices.push_back(e.a);
    vertices.push_back(e.b);
  }
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  g.names_ = std::move(vertices);
  auto id = [&](const std::string& n) {
    return static_cast<std::uint32_t>(
        std::lower_bound(g.names_.begin(), g.names_.end(), n) - g.names_.begin());
  };
  std::vector<std::map<std::uint32_t, double>> merged(g.names_.size());
  for (const auto& e : edges) {
    auto a = id(e.a), b = id(e.b);
    merged[a][b] += e.weight;
    merged[b][a] += e.weight;
  }
  std::vector<std::vector<Adjacency>> rows(g.names_.size());
  for (std::size_t v = 0; v < merged.size(); ++v) {
    for (const auto& [to, w] : merged[v]) rows[v].push_back({to, w});
  }
  fill_csr(rows, g.offsets_, g.cols_, g.weights_);
  return g;
}

PageRankResult pagerank(const Graph& graph, const PRConfig& config,
                        const kernels::KernelTable& ops) {
  config.validate();
  const std::size_t n = graph.vertex_count();
  if (n == 0) throw UsageError("PageRank: empty graph");

  std::vector<double> unit_weights;
  std::span<const double> weights = graph.weights();
  if (!config.weighted) {
    unit_weights.assign(graph.cols().size(), 1.0);
    weights = unit_weights;
  }

  const auto offsets = graph.offsets();
  std::vector<double> inv_strength(n, 0.0);
  std::vector<std::size_t> dangling;
  for (std::size_t v = 0; v < n; ++v) {
    double strength = 0.0;
    for (auto e = offsets[v]; e < offsets[v + 1]; ++e) strength += weights[e];
    if (strength > 0.0) {
      inv_strength[v] = 1.0 / strength;
    } else {
      dangling.push_back(v);
    }
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  const double d = config.damping;
  std::vector<double> x(n, inv_n), next(n), scaled(n);

  PageRankResult result;
  for (std::size_t it = 1; it <= config.max_iter; ++it) {
    ops.hadamard(x, inv_strength, scaled);
    ops.csr_gather(offsets, graph.cols(), weights, scaled, next);
    double dangling_mass = 0.0;
    for (auto v : dangling) dangling_mass += x[v];
    const double shift = (1.0 - d) * inv_n + d * dangling_mass * inv_n;
    ops.affine(next, d, shift, next);
    const double delta = ops.l1_distance(next, x);
    x.swap(next);
    result.iterations = it;
    if (delta < config.epsilon) {
      result.converged = true;
      break;
    }
  }

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return x[a] > x[b]; });
  result.ranking.source = "pagerank";
  result.ranking.items.reserve(n);
  for (auto v : order) result.ranking.items.push_back({graph.name(v), x[v]});
  result.scores = std::move(x);
  return result;
}

}  // namespace namecf
