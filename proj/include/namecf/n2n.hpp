#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "namecf/activity.hpp"
#include "namecf/cooccur.hpp"
#include "namecf/corpus.hpp"
#include "namecf/ranked_list.hpp"

namespace namecf {

enum class SeedBias { Frequency, Recency };

struct N2NConfig {
  SeedBias bias = SeedBias::Frequency;
  /// Activities whose interactions make up the seed material.
  ActivityFilter seed_filter = ActivityFilter::all();
  std::size_t n = 1000;
  /// Per pass; 0 means 50 * n.
  std::size_t max_iterations = 0;
  double recency_decay = 0.5;
  std::uint64_t seed = 42;

  std::size_t effective_max_iterations() const {
    return max_iterations == 0 ? 50 * n : max_iterations;
  }
  /// Throws UsageError.
  void validate() const;
};

/// Source of weighted choices. `cumulative` holds inclusive prefix sums of
/// nonnegative weights; the result is an index into it.
class Chooser {
 public:
  virtual ~Chooser() = default;
  virtual std::size_t pick(std::span<const double> cumulative) = 0;
};

class RandomChooser final : public Chooser {
 public:
  explicit RandomChooser(std::uint64_t seed) : rng_(seed) {}
  std::size_t pick(std::span<const double> cumulative) override;

 private:
  std::mt19937_64 rng_;
};

/// Deterministic per-user RNG seed derived from a global seed.
std::uint64_t user_seed(std::uint64_t seed, std::string_view user);

struct SeedWeights {
  std::vector<NameId> names;  // ascending
  std::vector<double> weights;
};

/// Seed distribution over the filtered names of a history.
///   Frequency: weight = number of filtered interactions with the name.
///   Recency:   weight = decay^d, d = distinct names seen after the name's
///              latest filtered interaction.
SeedWeights seed_weights(const UserHistory& history, SeedBias bias,
                         ActivityFilter filter, double decay);

/// Throws DataError when the filtered history is empty.
NameId sample_seed_name(const UserHistory& history, SeedBias bias,
                        ActivityFilter filter, double decay, Chooser& chooser);

/// Draws j with probability m(i,j) / sum_k m(i,k); nullopt on an empty entry.
std::optional<CoName> sample_co_name(std::span<const CoName> entry,
                                     Chooser& chooser);

/// Name-to-Name collaborative filtering over a co-occurrence bag.
///
/// A first pass samples seed names from the user's filtered history and
/// co-names from their bag entries; later passes use the recommendations
/// gathered so far as seeds until the list holds n names or a pass adds
/// nothing. Output is sorted by the multiplicity stored at acceptance,
/// ties in acceptance order.
class N2NModel {
 public:
  /// The bag must share the corpus name ids.
  N2NModel(const Corpus& corpus, const CooccurrenceBag& bag, N2NConfig config);

  RankedList recommend(UserId user) const;
  RankedList recommend(UserId user, Chooser& chooser) const;

  const N2NConfig& config() const { return config_; }

 private:
  RankedList run(const UserHistory& history, Chooser& chooser) const;

  const Corpus* corpus_;
  const CooccurrenceBag* bag_;
  N2NConfig config_;
  std::vector<std::vector<double>> cumulative_;  // per bag entry
};

}  // namespace namecf
