#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "namecf/corpus.hpp"

namespace namecf {

struct SynthParams {
  std::size_t clusters = 2;
  std::size_t users = 200;
  std::size_t names = 100;
  /// Probability that a history name ignores the user's cluster. The two
  /// final searches always come from the cluster.
  double noise = 0.2;
  /// Within-cluster popularity is proportional to rank^-zipf_exponent;
  /// 0 makes cluster membership the only structure.
  double zipf_exponent = 0.0;
  std::uint64_t seed = 42;
  std::size_t min_history = 3;
  std::size_t max_history = 10;

  void validate() const;
};

/// Planted-cluster activity log. Names n0000.. are split into contiguous
/// clusters and user k belongs to cluster k % clusters. Every history ends
/// with two distinct ENTER_SEARCH names from the user's cluster.
std::vector<Interaction> generate_synthetic(const SynthParams& params);

/// Cluster of a generated name id (the number in "n0042").
std::size_t synthetic_cluster_of_name(std::size_t name_index,
                                      const SynthParams& params);

/// Writes the log (default column order, tab-separated) and a known-names
/// file listing every generated name.
void write_synthetic(const SynthParams& params,
                     const std::filesystem::path& log_path,
                     const std::filesystem::path& known_path);

}  // namespace namecf
