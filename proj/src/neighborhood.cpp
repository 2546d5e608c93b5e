#include "namecf/neighborhood.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "namecf/error.hpp"

namespace namecf {

void UBConfig::validate() const {
  if (k < 1) throw UsageError("user-based: neighborhood size must be at least 1");
  if (n < 1) throw UsageError("user-based: list length must be at least 1");
}

namespace {

std::size_t intersection_size(std::span<const NameId> a, std::span<const NameId> b) {
  std::size_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

double x_log_x(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// Summed in ascending order so permuted inputs give bitwise-equal results.
double sorted_x_log_x_sum(std::array<double, 4> values) {
  std::sort(values.begin(), values.end());
  double total = 0.0;
  for (double v : values) total += x_log_x(v);
  return total;
}

}  // namespace

double tanimoto(std::size_t overlap, std::size_t size_a, std::size_t size_b) {
  const std::size_t uni = size_a + size_b - overlap;
  if (uni == 0) return 0.0;
  return static_cast<double>(overlap) / static_cast<double>(uni);
}

double tanimoto(std::span<const NameId> a, std::span<const NameId> b) {
  return tanimoto(intersection_size(a, b), a.size(), b.size());
}

double g_squared(double k11, double k12, double k21, double k22) {
  const double total = k11 + k12 + k21 + k22;
  const double cells = sorted_x_log_x_sum({k11, k12, k21, k22});
  const double margins =
      sorted_x_log_x_sum({k11 + k12, k21 + k22, k11 + k21, k12 + k22});
  const double g2 = 2.0 * (cells - margins + x_log_x(total));
  return g2 > 0.0 ? g2 : 0.0;
}

double log_likelihood_sim(std::size_t overlap, std::size_t size_a,
                          std::size_t size_b, std::size_t universe_size) {
  const std::size_t uni = size_a + size_b - overlap;
  if (universe_size < uni) {
    throw UsageError("log-likelihood similarity: universe smaller than the set union");
  }
  const double g2 = g_squared(static_cast<double>(overlap),
                              static_cast<double>(size_a - overlap),
                              static_cast<double>(size_b - overlap),
                              static_cast<double>(universe_size - uni));
  return 1.0 - 1.0 / (1.0 + g2);
}

double log_likelihood_sim(std::span<const NameId> a, std::span<const NameId> b,
                          std::size_t universe_size) {
  return log_likelihood_sim(intersection_size(a, b), a.size(), b.size(), universe_size);
}

double quantize_similarity(double sim) { return std::round(sim * 1e12) / 1e12; }

RankedList ub_recommend(UserId user, const Corpus& corpus, const UBConfig& config) {
  config.validate();
  RankedList out;
  if (user >= corpus.user_count()) return out;
  const auto& mine = corpus.history(user).names;
  if (mine.empty()) return out;

  std::vector<std::uint32_t> overlap(corpus.user_count(), 0);
  std::vector<UserId> touched;
  for (auto i : mine) {
    for (auto v : corpus.users_of(i)) {
      if (v == user) continue;
      if (overlap[v]++ == 0) touched.push_back(v);
    }
  }

  struct Neighbor {
    UserId id;
    double sim;
  };
  std::vector<Neighbor> neighbors;
  neighbors.reserve(touched.size());
  const std::size_t universe = corpus.name_count();
  for (auto v : touched) {
    const auto size_v = corpus.history(v).names.size();
    const double sim = config.similarity == Similarity::Tanimoto
                           ? tanimoto(overlap[v], mine.size(), size_v)
                           : log_likelihood_sim(overlap[v], mine.size(), size_v, universe);
    neighbors.push_back({v, quantize_similarity(sim)});
  }
  auto by_similarity = [](const Neighbor& a, const Neighbor& b) {
    return a.sim != b.sim ? a.sim > b.sim : a.id < b.id;
  };
  if (neighbors.size() > config.k) {
    std::partial_sort(neighbors.begin(), neighbors.begin() + config.k, neighbors.end(),
                      by_similarity);
    neighbors.resize(config.k);
  } else {
    std::sort(neighbors.begin(), neighbors.end(), by_similarity);
  }

  std::vector<double> score(corpus.name_count(), 0.0);
  std::vector<char> seen(corpus.name_count(), 0);
  std::vector<NameId> candidates;
  for (const auto& nb : neighbors) {
    for (auto i : corpus.history(nb.id).names) {
      if (std::binary_search(mine.begin(), mine.end(), i)) continue;
      score[i] += nb.sim;
      if (!seen[i]) {
        seen[i] = 1;
        candidates.push_back(i);
      }
    }
  }
  auto by_score = [&](NameId a, NameId b) {
    return score[a] != score[b] ? score[a] > score[b] : a < b;
  };
  if (candidates.size() > config.n) {
    std::partial_sort(candidates.begin(), candidates.begin() + config.n, candidates.end(),
                      by_score);
    candidates.resize(config.n);
  } else {
    std::sort(candidates.begin(), candidates.end(), by_score);
  }
  out.items.reserve(candidates.size());
  for (auto i : candidates) out.items.push_back({corpus.name(i), score[i]});
  return out;
}

}  // namespace namecf
