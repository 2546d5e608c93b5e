#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "namecf/activity.hpp"
#include "namecf/corpus.hpp"

namespace namecf {

enum class PopularityMeasure {
  DistinctUsers,  // |U(i)|
  Interactions,   // raw row count
};

struct PopularName {
  NameId name;
  std::size_t count;
};

/// Names by descending popularity, ties by ascending name.
std::vector<PopularName> popularity(
    const Corpus& corpus,
    PopularityMeasure measure = PopularityMeasure::DistinctUsers);

struct BagSpec {
  ActivityFilter filter = ActivityFilter::all();
  std::size_t exclude_top_k = 0;
  PopularityMeasure measure = PopularityMeasure::DistinctUsers;

  /// "filter=ES,LS,ND exclude=5"
  std::string to_string() const;
};

struct CoName {
  NameId name;
  std::uint32_t multiplicity;

  friend bool operator==(const CoName&, const CoName&) = default;
};

/// C(i) for every name i, with user-level multiplicities m(i,j).
///
/// Carries its own name table so it can be used without the corpus it was
/// built from; ids match the corpus ids when built from (or read against)
/// a corpus.
class CooccurrenceBag {
 public:
  CooccurrenceBag() = default;
  CooccurrenceBag(std::vector<std::string> names,
                  std::vector<std::vector<CoName>> entries, BagSpec spec);

  /// Entry sorted by multiplicity descending, ties by ascending name.
  std::span<const CoName> entry(NameId i) const { return entries_[i]; }
  std::optional<std::uint32_t> multiplicity(NameId i, NameId j) const;

  std::size_t name_count() const { return names_.size(); }
  const std::string& name(NameId i) const { return names_[i]; }
  std::span<const std::string> names() const { return names_; }
  std::optional<NameId> find_name(std::string_view name) const;

  const BagSpec& spec() const { return spec_; }
  /// Number of unordered pairs stored.
  std::size_t pair_count() const;
  bool empty() const { return pair_count() == 0; }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<CoName>> entries_;
  BagSpec spec_;
};

/// Counts, for each unordered name pair, the users whose filtered name set
/// contains both. The `exclude_top_k` most popular names (over the whole
/// corpus) are removed before pairs are formed.
CooccurrenceBag build_bag(const Corpus& corpus, const BagSpec& spec,
                          std::size_t threads = 1);

/// Names of u with at least one interaction passing `filter`, sorted.
std::vector<NameId> filtered_names(const UserHistory& history,
                                   ActivityFilter filter);

/// Header `#namecf-bag v1 filter=<spec> exclude=<k>`, then `i<TAB>j<TAB>m`
/// with i < j, each pair once.
void write_bag(const CooccurrenceBag& bag, const std::filesystem::path& path);
/// Standalone read: the name table is the set of names in the file.
CooccurrenceBag read_bag(const std::filesystem::path& path);
/// Read against a corpus: ids are the corpus ids. Unknown names are a
/// DataError.
CooccurrenceBag read_bag(const std::filesystem::path& path,
                         const Corpus& corpus);

}  // namespace namecf
