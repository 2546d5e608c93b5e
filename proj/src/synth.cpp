#include "namecf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "namecf/error.hpp"

namespace namecf {

void SynthParams::validate() const {
  if (clusters < 1 || users < 1 || names < 1) throw UsageError("synth: counts must be positive");
  if (names < 2 * clusters) throw UsageError("synth: need at least two names per cluster");
  if (!(noise >= 0.0 && noise <= 1.0)) throw UsageError("synth: noise must lie in [0, 1]");
  if (!(zipf_exponent >= 0.0)) throw UsageError("synth: zipf exponent must be nonnegative");
  if (min_history < 2 || max_history < min_history) {
    throw UsageError("synth: history lengths must satisfy 2 <= min <= max");
  }
}

std::size_t synthetic_cluster_of_name(std::size_t name_index, const SynthParams& params) {
  return name_index * params.clusters / params.names;
}

namespace {

std::string padded(char prefix, std::size_t value, std::size_t width) {
  auto digits = std::to_string(value);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return prefix + digits;
}

class Sampler {
 public:
  explicit Sampler(const SynthParams& p) : params_(p), rng_(p.seed) {
    cluster_names_.resize(p.clusters);
    for (std::size_t i = 0; i < p.names; ++i) {
      cluster_names_[synthetic_cluster_of_name(i, p)].push_back(i);
    }
    cluster_cum_.resize(p.clusters);
    for (std::size_t c = 0; c < p.clusters; ++c) {
      double total = 0.0;
      for (std::size_t r = 0; r < cluster_names_[c].size(); ++r) {
        total += std::pow(static_cast<double>(r + 1), -p.zipf_exponent);
        cluster_cum_[c].push_back(total);
      }
    }
  }

  double unit() { return unit_(rng_); }

  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }

  std::size_t draw_name(std::size_t cluster, bool in_cluster = false) {
    if (!in_cluster && unit() < params_.noise) return uniform(0, params_.names - 1);
    const auto& cum = cluster_cum_[cluster];
    const double u = unit() * cum.back();
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    if (it == cum.end()) --it;
    return cluster_names_[cluster][static_cast<std::size_t>(it - cum.begin())];
  }

  Activity draw_activity() {
    const double u = unit();
    if (u < 0.55) return Activity::EnterSearch;
    if (u < 0.75) return Activity::LinkSearch;
    if (u < 0.90) return Activity::NameDetails;
    if (u < 0.95) return Activity::AddFavorite;
    return Activity::LinkCategorySearch;
  }

 private:
  const SynthParams& params_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::vector<std::vector<std::size_t>> cluster_names_;
  std::vector<std::vector<double>> cluster_cum_;
};

std::string synthetic_name(std::size_t index, const SynthParams& p) {
  return padded('n', index, std::max<std::size_t>(4, std::to_string(p.names - 1).size()));
}

}  // namespace

std::vector<Interaction> generate_synthetic(const SynthParams& params) {
  params.validate();
  Sampler sampler(params);
  const std::size_t user_width = std::max<std::size_t>(5, std::to_string(params.users - 1).size());
  std::vector<Interaction> rows;
  for (std::size_t u = 0; u < params.users; ++u) {
    const auto user = padded('u', u, user_width);
    const std::size_t cluster = u % params.clusters;
    const std::size_t length = sampler.uniform(params.min_history, params.max_history);
    std::int64_t ts = 1331000000 + static_cast<std::int64_t>(u) * 100000;
    for (std::size_t s = 0; s + 2 < length; ++s) {
      const auto name = sampler.draw_name(cluster);
      rows.push_back({user, synthetic_name(name, params), sampler.draw_activity(), ts});
      ts += 60;
    }
    const auto last = sampler.draw_name(cluster, true);
    auto final_name = sampler.draw_name(cluster, true);
    while (final_name == last) final_name = sampler.draw_name(cluster, true);
    rows.push_back({user, synthetic_name(last, params), Activity::EnterSearch, ts});
    rows.push_back({user, synthetic_name(final_name, params), Activity::EnterSearch, ts + 60});
  }
  return rows;
}

void write_synthetic(const SynthParams& params, const std::filesystem::path& log_path,
                     const std::filesystem::path& known_path) {
  auto rows = generate_synthetic(params);
  for (const auto& p : {log_path, known_path}) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  }
  std::ofstream log(log_path, std::ios::binary);
  if (!log) throw DataError("cannot write synthetic log: " + log_path.string());
  for (const auto& r : rows) {
    log << r.user << '\t' << to_string(r.activity) << '\t' << r.name << '\t' << r.timestamp << '\n';
  }
  std::ofstream known(known_path, std::ios::binary);
  if (!known) throw DataError("cannot write known names: " + known_path.string());
  for (std::size_t i = 0; i < params.names; ++i) known << synthetic_name(i, params) << '\n';
}

}  // namespace namecf
