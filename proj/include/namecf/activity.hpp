#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace namecf {

enum class Activity : std::uint8_t {
  EnterSearch = 0,
  LinkSearch = 1,
  NameDetails = 2,
  LinkCategorySearch = 3,
  AddFavorite = 4,
};

inline constexpr int kActivityCount = 5;

/// Log spelling, e.g. "ENTER_SEARCH".
std::string_view to_string(Activity a);
/// Short code used in filter specs, e.g. "ES".
std::string_view short_code(Activity a);

/// Accepts the log spelling or the short code.
std::optional<Activity> parse_activity(std::string_view text);

/// A set of activity types. Parsed from "ES,LS,ND" style lists or "ALL".
class ActivityFilter {
 public:
  constexpr ActivityFilter() = default;

  static constexpr ActivityFilter all() { return ActivityFilter(0x1F); }
  static constexpr ActivityFilter none() { return ActivityFilter(0); }
  static ActivityFilter parse(std::string_view spec);

  constexpr bool contains(Activity a) const {
    return (mask_ >> static_cast<unsigned>(a)) & 1u;
  }
  constexpr ActivityFilter with(Activity a) const {
    return ActivityFilter(mask_ | (1u << static_cast<unsigned>(a)));
  }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr std::uint8_t mask() const { return mask_; }

  /// Canonical form: "ALL" or codes in enum order joined by ','.
  std::string to_string() const;

  friend constexpr bool operator==(ActivityFilter, ActivityFilter) = default;

 private:
  constexpr explicit ActivityFilter(std::uint8_t mask) : mask_(mask) {}
  std::uint8_t mask_ = 0;
};

}  // namespace namecf
