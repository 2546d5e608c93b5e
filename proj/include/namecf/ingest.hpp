#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "namecf/corpus.hpp"

namespace namecf {

/// Zero-based field positions of the four log columns.
struct ColumnMap {
  std::size_t user = 0;
  std::size_t activity = 1;
  std::size_t name = 2;
  std::size_t timestamp = 3;

  /// Parses an ordering such as "user,activity,name,timestamp".
  static ColumnMap parse(std::string_view order);
  std::size_t min_fields() const;
};

struct RejectedRow {
  std::size_t line = 0;
  std::string reason;
};

struct ParseResult {
  std::vector<Interaction> interactions;
  std::vector<RejectedRow> rejects;
};

/// Reads a delimiter-separated activity log. Blank lines and lines starting
/// with '#' are skipped; malformed rows go to `rejects`.
/// Throws DataError when the file cannot be opened.
ParseResult parse_activity_log(const std::filesystem::path& path,
                               const ColumnMap& columns = {},
                               char delimiter = '\t');
ParseResult parse_activity_log(std::istream& in, const ColumnMap& columns = {},
                               char delimiter = '\t');

class KnownNames {
 public:
  KnownNames() = default;
  explicit KnownNames(std::unordered_set<std::string> names)
      : names_(std::move(names)) {}

  /// One name per line (first tab-separated field); blank lines ignored.
  static KnownNames load(const std::filesystem::path& path);

  bool contains(std::string_view name) const {
    return names_.contains(std::string(name));
  }
  std::size_t size() const { return names_.size(); }

 private:
  std::unordered_set<std::string> names_;
};

struct PreprocessReport {
  std::size_t input_rows = 0;
  std::size_t dropped_category = 0;  // LINK_CATEGORY_SEARCH rows
  std::size_t dropped_unknown = 0;   // name not in the known list
  std::size_t retained_rows = 0;
  std::size_t user_name_pairs = 0;
  std::size_t users = 0;
  std::size_t names = 0;
};

struct PreprocessResult {
  Corpus corpus;
  PreprocessReport report;
};

/// Drops LINK_CATEGORY_SEARCH rows and rows with unknown names.
PreprocessResult preprocess(std::span<const Interaction> rows,
                            const KnownNames& known);

struct StatsReport {
  std::size_t users = 0;
  std::size_t names = 0;
  double mean_names_per_user = 0.0;
  double median_names_per_user = 0.0;
  std::size_t min_names_per_user = 0;
  std::size_t max_names_per_user = 0;
  /// value -> number of users with |I(u)| == value
  std::map<std::size_t, std::size_t> names_per_user;
  /// value -> number of names with |U(i)| == value
  std::map<std::size_t, std::size_t> users_per_name;
};

/// Throws DataError on an empty corpus.
StatsReport compute_stats(const Corpus& corpus);

/// `value<TAB>count` lines.
void write_histogram(const std::map<std::size_t, std::size_t>& histogram,
                     const std::filesystem::path& path);

enum class SplitMode { Strict, Relaxed };

/// Held-out names ordered by recency: `first` is the most recent.
struct TargetPair {
  std::string first;
  std::string second;
};

using Targets = std::map<std::string, TargetPair>;

struct EvalSplit {
  Corpus train;
  Targets targets;
  std::vector<std::string> skipped;  // relaxed users without two names
};

/// Leave-last-two split.
///   Strict:  last two distinct ENTER_SEARCH names of every user.
///   Relaxed: last two distinct names of each user in `relaxed_users`,
///            any activity.
/// All interactions with a held-out name are removed from that user's
/// training history.
EvalSplit split_validation(const Corpus& corpus, SplitMode mode,
                           const std::set<std::string>& relaxed_users = {});

/// `#namecf-split v1` then `user<TAB>first<TAB>second`.
void write_targets(const Targets& targets, const std::filesystem::path& path);
Targets read_targets(const std::filesystem::path& path);

/// One identifier per line.
std::set<std::string> read_id_list(const std::filesystem::path& path);

}  // namespace namecf
