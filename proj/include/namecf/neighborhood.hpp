#pragma once

#include <cstddef>
#include <span>

#include "namecf/corpus.hpp"
#include "namecf/ranked_list.hpp"

namespace namecf {

enum class Similarity { Tanimoto, LogLikelihood };

struct UBConfig {
  Similarity similarity = Similarity::Tanimoto;
  std::size_t k = 100;
  std::size_t n = 1000;

  void validate() const;
};

/// |a ∩ b| / |a ∪ b| over sorted id sets; 0 when both are empty.
double tanimoto(std::span<const NameId> a, std::span<const NameId> b);
double tanimoto(std::size_t overlap, std::size_t size_a, std::size_t size_b);

/// Dunning's G² for a 2x2 contingency table.
double g_squared(double k11, double k12, double k21, double k22);

/// 1 - 1/(1 + G²) for the table built from two sets over a universe.
double log_likelihood_sim(std::span<const NameId> a, std::span<const NameId> b,
                          std::size_t universe_size);
double log_likelihood_sim(std::size_t overlap, std::size_t size_a,
                          std::size_t size_b, std::size_t universe_size);

/// Similarities are snapped to a 1e-12 grid before ranking so that values
/// equal in exact arithmetic tie regardless of rounding path.
double quantize_similarity(double sim);

/// User-based top-N: neighbors are the k most similar users sharing at least
/// one name (ties by user id), each candidate name scores the summed
/// similarity of the neighbors holding it.
RankedList ub_recommend(UserId user, const Corpus& corpus,
                        const UBConfig& config);

}  // namespace namecf
