#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "namecf/cooccur.hpp"
#include "namecf/error.hpp"
#include "namecf/pagerank.hpp"
#include "oracles.hpp"

using namespace namecf;
using namespace namecf::testing;

namespace {

double total(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

Graph random_graph(std::mt19937_64& rng, std::size_t n, std::vector<WeightedEdge>& edges) {
  std::bernoulli_distribution coin(0.3);
  std::uniform_int_distribution<int> w(1, 6);
  std::vector<std::string> vertices;
  for (std::size_t v = 0; v < n; ++v) vertices.push_back("v" + std::to_string(v));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (coin(rng)) edges.push_back({vertices[a], vertices[b], static_cast<double>(w(rng))});
    }
  }
  return Graph::from_edges(vertices, edges);
}

}  // namespace

TEST_CASE("graph from the three-user bag") {
  auto c = three_user_example();
  auto g = Graph::from_bag(build_bag(c, {}));
  auto names = std::vector<std::string>(g.names().begin(), g.names().end());
  const auto i4 = static_cast<std::size_t>(std::find(names.begin(), names.end(), "i4") - names.begin());
  REQUIRE(i4 < names.size());
  CHECK(g.degree(i4) == 6);
  std::vector<std::string> nbrs;
  for (auto e = g.offsets()[i4]; e < g.offsets()[i4 + 1]; ++e) nbrs.push_back(g.name(g.cols()[e]));
  CHECK(nbrs == std::vector<std::string>{"i1", "i2", "i3", "i5", "i6", "i7"});
}

TEST_CASE("trivial graphs") {
  CHECK(Graph::from_bag(CooccurrenceBag{}).vertex_count() == 0);
  CHECK_THROWS_AS(pagerank(Graph{}), UsageError);

  std::vector<WeightedEdge> edges{{"a", "b", 2.0}};
  auto g = Graph::from_edges({}, edges);
  CHECK(g.vertex_count() == 2);
  CHECK(g.edge_count() == 1);
  CHECK(g.weights()[0] == 2.0);

  auto r = pagerank(g);
  CHECK(r.converged);
  CHECK(r.scores[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.scores[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.ranking.names() == std::vector<std::string>{"a", "b"});

  std::vector<WeightedEdge> loop{{"a", "a", 1.0}};
  CHECK_THROWS_AS(Graph::from_edges({}, loop), UsageError);
}

TEST_CASE("3-node path matches the direct solve") {
  std::vector<WeightedEdge> edges{{"a", "b", 1.0}, {"b", "c", 1.0}};
  auto r = pagerank(Graph::from_edges({}, edges));
  auto x = oracle::pagerank_direct({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}, 0.85);
  for (std::size_t v = 0; v < 3; ++v) CHECK(std::abs(r.scores[v] - x[v]) < 1e-8);
  CHECK(r.ranking.names() == std::vector<std::string>{"b", "a", "c"});
}

TEST_CASE("random weighted graphs match the direct solve") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 9);
    std::vector<WeightedEdge> edges;
    auto g = random_graph(rng, n, edges);
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    bool isolated = false;
    for (std::size_t v = 0; v < n; ++v) isolated = isolated || g.degree(v) == 0;
    if (isolated) continue;
    for (const auto& e : edges) {
      const auto a = std::stoul(e.a.substr(1)), b = std::stoul(e.b.substr(1));
      w[a][b] += e.weight;
      w[b][a] += e.weight;
    }
    // Vertex ids follow name order, which differs from numeric order past v9.
    auto x = oracle::pagerank_direct(w, 0.85);
    auto r = pagerank(g);
    CHECK(r.converged);
    for (std::size_t v = 0; v < n; ++v) {
      CHECK(std::abs(r.scores[v] - x[std::stoul(g.name(v).substr(1))]) < 1e-8);
    }
  }
}

TEST_CASE("scores form a distribution, with and without dangling vertices") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<WeightedEdge> edges;
    auto g = random_graph(rng, 3 + static_cast<std::size_t>(trial % 12), edges);
    for (bool weighted : {true, false}) {
      PRConfig config;
      config.weighted = weighted;
      auto r = pagerank(g, config);
      CHECK(std::abs(total(r.scores) - 1.0) < 1e-9);
      CHECK(is_well_formed(r.ranking));
      CHECK(r.ranking.size() == g.vertex_count());
    }
  }
}

TEST_CASE("vertex and edge order do not matter") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<WeightedEdge> edges;
    auto g = random_graph(rng, 8, edges);
    std::vector<std::string> vertices(g.names().begin(), g.names().end());
    std::shuffle(edges.begin(), edges.end(), rng);
    std::shuffle(vertices.begin(), vertices.end(), rng);
    for (auto& e : edges) {
      if (rng() % 2) std::swap(e.a, e.b);
    }
    auto h = Graph::from_edges(vertices, edges);
    auto a = pagerank(g), b = pagerank(h);
    CHECK(a.ranking.items == b.ranking.items);
    for (std::size_t v = 0; v < a.scores.size(); ++v) CHECK(std::abs(a.scores[v] - b.scores[v]) <= 1e-12);
  }
}

TEST_CASE("regular graphs give equal scores") {
  std::vector<WeightedEdge> cycle;
  for (int v = 0; v < 7; ++v) cycle.push_back({"c" + std::to_string(v), "c" + std::to_string((v + 1) % 7), 1.0});
  auto r = pagerank(Graph::from_edges({}, cycle));
  for (double s : r.scores) CHECK(std::abs(s - 1.0 / 7.0) <= 1e-12);
  CHECK(r.ranking.names().front() == "c0");
}

TEST_CASE("non-convergence is flagged") {
  std::vector<WeightedEdge> edges{{"a", "b", 1.0}, {"b", "c", 1.0}};
  PRConfig config;
  config.max_iter = 2;
  auto r = pagerank(Graph::from_edges({}, edges), config);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 2);
  CHECK(std::abs(total(r.scores) - 1.0) < 1e-9);
}

TEST_CASE("config validation") {
  PRConfig config;
  config.damping = 1.0;
  CHECK_THROWS_AS(config.validate(), UsageError);
  config.damping = 0.5;
  config.epsilon = 0.0;
  CHECK_THROWS_AS(config.validate(), UsageError);
}

TEST_CASE("SIMD and scalar PageRank agree") {
  const auto* simd = kernels::avx2();
  if (simd == nullptr) return;
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<WeightedEdge> edges;
    auto g = random_graph(rng, 40, edges);
    auto a = pagerank(g, {}, kernels::scalar());
    auto b = pagerank(g, {}, *simd);
    for (std::size_t v = 0; v < a.scores.size(); ++v) CHECK(std::abs(a.scores[v] - b.scores[v]) <= 1e-12);
  }
}
