#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "namecf/activity.hpp"

namespace namecf {

/// Dense identifiers. Both are assigned in ascending lexicographic order of
/// the underlying strings, so comparing ids compares the strings.
using NameId = std::uint32_t;
using UserId = std::uint32_t;

/// One log row.
struct Interaction {
  std::string user;
  std::string name;
  Activity activity = Activity::EnterSearch;
  std::int64_t timestamp = 0;

  friend bool operator==(const Interaction&, const Interaction&) = default;
};

struct Event {
  NameId name;
  Activity activity;
  std::int64_t timestamp;
};

/// A user's interactions in timestamp order (ties keep input order) plus
/// the distinct names among them.
struct UserHistory {
  std::vector<Event> sequence;
  std::vector<NameId> names;  // sorted, distinct

  bool contains(NameId name) const;
};

/// Immutable user/name interaction data with an inverted index.
class Corpus {
 public:
  Corpus() = default;

  /// Interactions are grouped per user and stably sorted by timestamp.
  static Corpus from_interactions(std::span<const Interaction> rows);

  std::size_t user_count() const { return users_.size(); }
  std::size_t name_count() const { return names_.size(); }
  std::size_t interaction_count() const { return interaction_count_; }
  /// Number of distinct (user, name) pairs; equals the sum of |I(u)|.
  std::size_t pair_count() const { return pair_count_; }
  bool empty() const { return users_.empty(); }

  const std::string& user(UserId u) const { return users_[u]; }
  const std::string& name(NameId i) const { return names_[i]; }
  std::span<const std::string> users() const { return users_; }
  std::span<const std::string> names() const { return names_; }

  std::optional<UserId> find_user(std::string_view user) const;
  std::optional<NameId> find_name(std::string_view name) const;

  const UserHistory& history(UserId u) const { return histories_[u]; }
  std::span<const UserHistory> histories() const { return histories_; }

  /// U(i), sorted ascending.
  std::span<const UserId> users_of(NameId i) const { return inverted_[i]; }

  /// Rows in user order, then sequence order.
  std::vector<Interaction> interactions() const;

 private:
  std::vector<std::string> users_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, UserId> user_index_;
  std::unordered_map<std::string, NameId> name_index_;
  std::vector<UserHistory> histories_;
  std::vector<std::vector<UserId>> inverted_;
  std::size_t interaction_count_ = 0;
  std::size_t pair_count_ = 0;
};

/// `#namecf-corpus v1` followed by `user<TAB>name<TAB>activity<TAB>timestamp`.
void write_corpus(const Corpus& corpus, const std::filesystem::path& path);
Corpus read_corpus(const std::filesystem::path& path);

}  // namespace namecf
