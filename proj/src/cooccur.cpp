#include "namecf/cooccur.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <unordered_map>

#include "namecf/error.hpp"
#include "namecf/parallel.hpp"

namespace namecf {

std::vector<PopularName> popularity(const Corpus& corpus,
                                    PopularityMeasure measure) {
  std::vector<PopularName> ranking(corpus.name_count());
  for (NameId i = 0; i < corpus.name_count(); ++i) {
    ranking[i] = {i, corpus.users_of(i).size()};
  }
  if (measure == PopularityMeasure::Interactions) {
    for (auto& r : ranking) r.count = 0;
    for (const auto& h : corpus.histories()) {
      for (const auto& e : h.sequence) ++ranking[e.name].count;
    }
  }
  std::stable_sort(ranking.begin(), ranking.end(),
                   [](const PopularName& a, const PopularName& b) {
                     return a.count > b.count;
                   });
  return ranking;
}

std::string BagSpec::to_string() const {
  std::string out = "filter=" + filter.to_string() + " exclude=" + std::to_string(exclude_top_k);
  if (measure == PopularityMeasure::Interactions) out += " popularity=interactions";
  return out;
}

CooccurrenceBag::CooccurrenceBag(std::vector<std::string> names,
                                 std::vector<std::vector<CoName>> entries,
                                 BagSpec spec)
    : names_(std::move(names)), entries_(std::move(entries)), spec_(spec) {
  entries_.resize(names_.size());
  for (auto& entry : entries_) {
    std::sort(entry.begin(), entry.end(), [](const CoName& a, const CoName& b) {
      return a.multiplicity != b.multiplicity ? a.multiplicity > b.multiplicity
                                              : a.name < b.name;
    });
  }
}

std::optional<std::uint32_t> CooccurrenceBag::multiplicity(NameId i, NameId j) const {
  for (const auto& c : entries_[i]) {
    if (c.name == j) return c.multiplicity;
  }
  return std::nullopt;
}

std::optional<NameId> CooccurrenceBag::find_name(std::string_view name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || *it != name) return std::nullopt;
  return static_cast<NameId>(it - names_.begin());
}

std::size_t CooccurrenceBag::pair_count() const {
  std::size_t total = 0;
  for (const auto& e : entries_) total += e.size();
  return total / 2;
}

std::vector<NameId> filtered_names(const UserHistory& history,
                                   ActivityFilter filter) {
  if (filter == ActivityFilter::all()) return history.names;
  std::vector<NameId> names;
  for (const auto& e : history.sequence) {
    if (filter.contains(e.activity)) names.push_back(e.name);
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return names;
}

namespace {

using PairCounts = std::unordered_map<std::uint64_t, std::uint32_t>;

constexpr std::uint64_t pair_key(NameId a, NameId b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

CooccurrenceBag build_bag(const Corpus& corpus, const BagSpec& spec,
                          std::size_t threads) {
  std::vector<bool> excluded(corpus.name_count(), false);
  if (spec.exclude_top_k > 0) {
    if (spec.exclude_top_k >= corpus.name_count()) {
      throw UsageError("exclude_top_k must be smaller than the number of names");
    }
    auto ranking = popularity(corpus, spec.measure);
    for (std::size_t k = 0; k < spec.exclude_top_k; ++k) excluded[ranking[k].name] = true;
  }

  const std::size_t users = corpus.user_count();
  threads = std::max<std::size_t>(1, std::min(threads, users));
  std::vector<PairCounts> partial(threads);
  const std::size_t chunk = users == 0 ? 0 : (users + threads - 1) / threads;
  parallel_for(threads, threads, [&](std::size_t t) {
    auto& counts = partial[t];
    const std::size_t end = std::min(users, (t + 1) * chunk);
    for (std::size_t u = t * chunk; u < end; ++u) {
      auto names = filtered_names(corpus.history(static_cast<UserId>(u)), spec.filter);
      std::erase_if(names, [&](NameId i) { return excluded[i]; });
      for (std::size_t a = 0; a < names.size(); ++a) {
        for (std::size_t b = a + 1; b < names.size(); ++b) {
          ++counts[pair_key(names[a], names[b])];
        }
      }
    }
  });

  auto& merged = partial.front();
  for (std::size_t t = 1; t < partial.size(); ++t) {
    for (const auto& [key, m] : partial[t]) merged[key] += m;
    PairCounts().swap(partial[t]);
  }

  std::vector<std::vector<CoName>> entries(corpus.name_count());
  for (const auto& [key, m] : merged) {
    auto a = static_cast<NameId>(key >> 32);
    auto b = static_cast<NameId>(key & 0xFFFFFFFFu);
    entries[a].push_back({b, m});
    entries[b].push_back({a, m});
  }
  std::vector<std::string> names(corpus.names().begin(), corpus.names().end());
  return CooccurrenceBag(std::move(names), std::move(entries), spec);
}

namespace {

constexpr std::string_view kBagMagic = "#namecf-bag v1";

BagSpec parse_bag_header(const std::string& header, const std::filesystem::path& path) {
  if (header.rfind(kBagMagic, 0) != 0) {
    throw DataError("not a namecf bag file (bad header): " + path.string());
  }
  BagSpec spec;
  std::string_view rest(header);
  rest.remove_prefix(kBagMagic.size());
  while (!rest.empty()) {
    while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
    auto space = rest.find(' ');
    auto token = rest.substr(0, space);
    auto eq = token.find('=');
    if (eq != std::string_view::npos) {
      auto key = token.substr(0, eq);
      auto value = token.substr(eq + 1);
      if (key == "filter") {
        spec.filter = ActivityFilter::parse(value);
      } else if (key == "exclude") {
        std::from_chars(value.data(), value.data() + value.size(), spec.exclude_top_k);
      } else if (key == "popularity" && value == "interactions") {
        spec.measure = PopularityMeasure::Interactions;
      }
    }
    if (space == std::string_view::npos) break;
    rest.remove_prefix(space);
  }
  return spec;
}

struct RawPair {
  std::string a, b;
  std::uint32_t m;
};

std::pair<BagSpec, std::vector<RawPair>> read_raw_bag(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open bag file: " + path.string());
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto spec = parse_bag_header(line, path);
  std::vector<RawPair> pairs;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    std::uint32_t m = 0;
    bool ok = t2 != std::string::npos;
    if (ok) {
      auto [ptr, ec] = std::from_chars(line.data() + t2 + 1, line.data() + line.size(), m);
      ok = ec == std::errc() && ptr == line.data() + line.size() && m >= 1;
    }
    if (!ok) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected name<TAB>name<TAB>multiplicity");
    }
    RawPair p{line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), m};
    if (p.a == p.b) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": self-pair");
    }
    pairs.push_back(std::move(p));
  }
  return {spec, std::move(pairs)};
}

}  // namespace

void write_bag(const CooccurrenceBag& bag, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write bag file: " + path.string());
  out << kBagMagic << ' ' << bag.spec().to_string() << '\n';
  // Name ids are in lexicographic order, so i < j by id is i < j by name.
  for (NameId i = 0; i < bag.name_count(); ++i) {
    std::vector<CoName> upper;
    for (const auto& c : bag.entry(i)) {
      if (c.name > i) upper.push_back(c);
    }
    std::sort(upper.begin(), upper.end(),
              [](const CoName& a, const CoName& b) { return a.name < b.name; });
    for (const auto& c : upper) {
      out << bag.name(i) << '\t' << bag.name(c.name) << '\t' << c.multiplicity << '\n';
    }
  }
  if (!out) throw DataError("error writing bag file: " + path.string());
}

CooccurrenceBag read_bag(const std::filesystem::path& path) {
  auto [spec, pairs] = read_raw_bag(path);
  std::vector<std::string> names;
  for (const auto& p : pairs) {
    names.push_back(p.a);
    names.push_back(p.b);
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  auto id = [&](const std::string& n) {
    return static_cast<NameId>(std::lower_bound(names.begin(), names.end(), n) - names.begin());
  };
  std::vector<std::vector<CoName>> entries(names.size());
  for (const auto& p : pairs) {
    auto a = id(p.a), b = id(p.b);
    entries[a].push_back({b, p.m});
    entries[b].push_back({a, p.m});
  }
  return CooccurrenceBag(std::move(names), std::move(entries), spec);
}

CooccurrenceBag read_bag(const std::filesystem::path& path, const Corpus& corpus) {
  auto [spec, pairs] = read_raw_bag(path);
  std::vector<std::vector<CoName>> entries(corpus.name_count());
  for (const auto& p : pairs) {
    auto a = corpus.find_name(p.a);
    auto b = corpus.find_name(p.b);
    if (!a || !b) {
      throw DataError("bag " + path.string() + " references a name missing from the corpus: " +
                      (a ? p.b : p.a));
    }
    entries[*a].push_back({*b, p.m});
    entries[*b].push_back({*a, p.m});
  }
  std::vector<std::string> names(corpus.names().begin(), corpus.names().end());
  return CooccurrenceBag(std::move(names), std::move(entries), spec);
}

}  // namespace namecf
