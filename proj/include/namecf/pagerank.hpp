#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "namecf/cooccur.hpp"
#include "namecf/kernels.hpp"
#include "namecf/ranked_list.hpp"

namespace namecf {

struct PRConfig {
  double damping = 0.85;
  double epsilon = 1e-10;
  std::size_t max_iter = 200;
  bool weighted = true;

  void validate() const;
};

struct WeightedEdge {
  std::string a;
  std::string b;
  double weight = 1.0;
};

/// Undirected weighted graph in CSR form. Vertices are sorted by name and
/// adjacency rows by neighbor id, so the layout does not depend on the
/// order vertices or edges were supplied in.
class Graph {
 public:
  Graph() = default;

  /// Vertices are the names with a nonempty bag entry; edge weight m(i,j).
  static Graph from_bag(const CooccurrenceBag& bag);
  /// Vertices are `vertices` plus every edge endpoint. Parallel edges are
  /// merged by summing weights; self-loops are rejected.
  static Graph from_edges(std::vector<std::string> vertices,
                          std::span<const WeightedEdge> edges);

  std::size_t vertex_count() const { return names_.size(); }
  std::size_t edge_count() const { return cols_.size() / 2; }
  const std::string& name(std::size_t v) const { return names_[v]; }
  std::span<const std::string> names() const { return names_; }

  std::span<const std::uint32_t> offsets() const { return offsets_; }
  std::span<const std::uint32_t> cols() const { return cols_; }
  std::span<const double> weights() const { return weights_; }

  std::size_t degree(std::size_t v) const {
    return offsets_[v + 1] - offsets_[v];
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<std::uint32_t> cols_;
  std::vector<double> weights_;
};

struct PageRankResult {
  RankedList ranking;  // descending, ties by ascending name
  std::vector<double> scores;  // by vertex id
  std::size_t iterations = 0;
  bool converged = false;
};

/// Power iteration with uniform teleport; mass of vertices without edges is
/// spread uniformly. Stops when the L1 change drops below epsilon.
/// Throws UsageError on an empty graph.
PageRankResult pagerank(const Graph& graph, const PRConfig& config = {},
                        const kernels::KernelTable& ops = kernels::active());

}  // namespace namecf
