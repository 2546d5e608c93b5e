#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "namecf/ranked_list.hpp"
#include "namecf/runs.hpp"

namespace namecf {

/// Weighted reciprocal-rank fusion: score(i) = sum_l alpha_l / rank_l(i),
/// 1-based ranks, 0 for lists without i. Top-n, ties by ascending name.
/// Throws UsageError when the sizes of `lists` and `alphas` differ.
RankedList rr_combine(std::span<const RankedList> lists,
                      std::span<const double> alphas, std::size_t n);

/// Appends filler names missing from base until n names. Base items are
/// kept as-is; appended items score strictly below the base minimum.
RankedList fill_up(const RankedList& base, const RankedList& filler,
                   std::size_t n);

struct EnsembleNode {
  enum class Kind { Leaf, Combine, FillUp };

  std::string name;
  Kind kind = Kind::Leaf;
  std::string model;                                   // Leaf
  std::vector<std::pair<std::string, double>> children;  // Combine
  std::string base;                                    // FillUp
  std::string filler;                                  // FillUp
  std::size_t n = 1000;                                // FillUp
};

/// A named DAG of leaf/combine/fillup nodes with a designated root.
///
///   # comment
///   m0    = leaf(m0)
///   E     = combine(m0:0.5, m1:0.5)
///   E_pr  = fillup(E, m8, 1000)
///   root: E_pr
class EnsembleTree {
 public:
  /// Throws DataError on syntax errors, unknown nodes, cycles, a Combine
  /// with fewer than two children or without a positive weight.
  static EnsembleTree parse(const std::string& text);
  static EnsembleTree load(const std::filesystem::path& path);

  const EnsembleNode& root() const { return node(root_); }
  const EnsembleNode& node(const std::string& name) const;
  bool has_node(const std::string& name) const;

  /// Model ids referenced by leaves, ascending.
  std::set<std::string> leaf_models() const;

  /// Throws DataError("unknown leaf: <id>") for a leaf model not in
  /// `models`.
  void check_models(const std::set<std::string>& models) const;

  /// Throws DataError naming a leaf whose run is missing.
  RankedList evaluate_user(const std::string& user, const RunStore& runs,
                           std::size_t n) const;

 private:
  RankedList evaluate(const EnsembleNode& node, const std::string& user,
                      const RunStore& runs, std::size_t n) const;

  std::map<std::string, EnsembleNode> nodes_;
  std::string root_;
};

/// Evaluates the tree for each user; the result is a Run named `output`.
Run evaluate_tree(const EnsembleTree& tree, const RunStore& runs,
                  const std::vector<std::string>& users, std::size_t n,
                  const std::string& output = "ensemble",
                  std::size_t threads = 1);

/// The default assembly tree in config-file form.
std::string default_tree_text();

}  // namespace namecf
