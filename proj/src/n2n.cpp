#include "namecf/n2n.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "namecf/error.hpp"

namespace namecf {

void N2NConfig::validate() const {
  if (n < 1) throw UsageError("N2N: list length must be at least 1");
  if (effective_max_iterations() < n) {
    throw UsageError("N2N: max_iterations must be at least N");
  }
  if (bias == SeedBias::Recency && !(recency_decay > 0.0 && recency_decay <= 1.0)) {
    throw UsageError("N2N: recency_decay must lie in (0, 1]");
  }
}

std::size_t RandomChooser::pick(std::span<const double> cumulative) {
  if (cumulative.empty() || !(cumulative.back() > 0.0)) {
    throw UsageError("cannot sample from an empty or zero-weight distribution");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng_) * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) --it;
  return static_cast<std::size_t>(it - cumulative.begin());
}

std::uint64_t user_seed(std::uint64_t seed, std::string_view user) {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (unsigned char c : user) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  // splitmix64 finalizer over the combined value
  std::uint64_t z = h ^ (seed + 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

SeedWeights seed_weights(const UserHistory& history, SeedBias bias,
                         ActivityFilter filter, double decay) {
  SeedWeights out;
  if (bias == SeedBias::Frequency) {
    std::map<NameId, double> counts;
    for (const auto& e : history.sequence) {
      if (filter.contains(e.activity)) counts[e.name] += 1.0;
    }
    for (const auto& [name, count] : counts) {
      out.names.push_back(name);
      out.weights.push_back(count);
    }
    return out;
  }

  // Recency: rank names by their latest filtered interaction.
  std::map<NameId, std::size_t> latest;
  for (std::size_t k = 0; k < history.sequence.size(); ++k) {
    const auto& e = history.sequence[k];
    if (filter.contains(e.activity)) latest[e.name] = k;
  }
  std::vector<std::pair<std::size_t, NameId>> by_time;
  for (const auto& [name, pos] : latest) by_time.emplace_back(pos, name);
  std::sort(by_time.rbegin(), by_time.rend());
  std::map<NameId, double> weight;
  for (std::size_t d = 0; d < by_time.size(); ++d) {
    weight[by_time[d].second] = std::pow(decay, static_cast<double>(d));
  }
  for (const auto& [name, w] : weight) {
    out.names.push_back(name);
    out.weights.push_back(w);
  }
  return out;
}

namespace {

std::vector<double> prefix_sums(std::span<const double> weights) {
  std::vector<double> cumulative(weights.size());
  double total = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    total += weights[k];
    cumulative[k] = total;
  }
  return cumulative;
}

}  // namespace

NameId sample_seed_name(const UserHistory& history, SeedBias bias,
                        ActivityFilter filter, double decay, Chooser& chooser) {
  auto seeds = seed_weights(history, bias, filter, decay);
  if (seeds.names.empty()) throw DataError("no seed material: filtered history is empty");
  auto cumulative = prefix_sums(seeds.weights);
  return seeds.names[chooser.pick(cumulative)];
}

std::optional<CoName> sample_co_name(std::span<const CoName> entry, Chooser& chooser) {
  if (entry.empty()) return std::nullopt;
  std::vector<double> cumulative(entry.size());
  double total = 0.0;
  for (std::size_t k = 0; k < entry.size(); ++k) {
    total += entry[k].multiplicity;
    cumulative[k] = total;
  }
  return entry[chooser.pick(cumulative)];
}

N2NModel::N2NModel(const Corpus& corpus, const CooccurrenceBag& bag, N2NConfig config)
    : corpus_(&corpus), bag_(&bag), config_(config) {
  config_.validate();
  if (bag.name_count() != corpus.name_count()) {
    throw UsageError("N2N: bag and corpus name tables differ");
  }
  cumulative_.resize(bag.name_count());
  for (NameId i = 0; i < bag.name_count(); ++i) {
    auto entry = bag.entry(i);
    auto& cum = cumulative_[i];
    cum.resize(entry.size());
    double total = 0.0;
    for (std::size_t k = 0; k < entry.size(); ++k) {
      total += entry[k].multiplicity;
      cum[k] = total;
    }
  }
}

RankedList N2NModel::recommend(UserId user) const {
  RandomChooser chooser(user_seed(config_.seed, corpus_->user(user)));
  return recommend(user, chooser);
}

RankedList N2NModel::recommend(UserId user, Chooser& chooser) const {
  return run(corpus_->history(user), chooser);
}

RankedList N2NModel::run(const UserHistory& history, Chooser& chooser) const {
  RankedList out;
  auto seeds = seed_weights(history, config_.bias, config_.seed_filter,
                            config_.recency_decay);
  if (seeds.names.empty()) return out;

  const std::size_t names = bag_->name_count();
  const std::size_t n = config_.n;
  const std::size_t max_iterations = config_.effective_max_iterations();

  std::vector<char> excluded(names, 0);
  for (auto i : history.names) excluded[i] = 1;
  std::vector<char> in_recs(names, 0);
  std::vector<std::uint32_t> stamp(names, 0);
  std::uint32_t generation = 0;
  struct Accepted {
    NameId name;
    std::uint32_t multiplicity;
  };
  std::vector<Accepted> recs;

  // One Name-to-Name pass over a seed set; returns the number of names added.
  auto pass = [&](std::span<const NameId> seed_names, std::span<const double> seed_cum) {
    // Count acceptable co-names reachable from seeds that can be drawn, so a
    // saturated pass ends without burning its whole iteration budget.
    ++generation;
    std::size_t remaining = 0;
    double previous = 0.0;
    for (std::size_t s = 0; s < seed_names.size(); ++s) {
      const bool drawable = seed_cum[s] > previous;
      previous = seed_cum[s];
      if (!drawable) continue;
      for (const auto& c : bag_->entry(seed_names[s])) {
        if (excluded[c.name] || in_recs[c.name] || stamp[c.name] == generation) continue;
        stamp[c.name] = generation;
        ++remaining;
      }
    }

    std::size_t added = 0;
    for (std::size_t t = 0; t < max_iterations && recs.size() < n && remaining > 0; ++t) {
      const NameId seed = seed_names[chooser.pick(seed_cum)];
      auto entry = bag_->entry(seed);
      if (entry.empty()) continue;
      const auto& co = entry[chooser.pick(cumulative_[seed])];
      if (excluded[co.name] || in_recs[co.name]) continue;
      in_recs[co.name] = 1;
      recs.push_back({co.name, co.multiplicity});
      ++added;
      --remaining;
    }
    return added;
  };

  auto seed_cum = prefix_sums(seeds.weights);
  pass(seeds.names, seed_cum);

  while (recs.size() < n && !recs.empty()) {
    std::vector<NameId> expansion;
    expansion.reserve(recs.size());
    for (const auto& r : recs) expansion.push_back(r.name);
    std::vector<double> uniform(expansion.size());
    for (std::size_t k = 0; k < uniform.size(); ++k) uniform[k] = static_cast<double>(k + 1);
    if (pass(expansion, uniform) == 0) break;
  }

  std::stable_sort(recs.begin(), recs.end(), [](const Accepted& a, const Accepted& b) {
    return a.multiplicity > b.multiplicity;
  });
  out.items.reserve(recs.size());
  for (const auto& r : recs) {
    out.items.push_back({bag_->name(r.name), static_cast<double>(r.multiplicity)});
  }
  return out;
}

}  // namespace namecf
