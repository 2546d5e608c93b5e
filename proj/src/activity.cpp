#include "namecf/activity.hpp"

#include <array>

#include "namecf/error.hpp"

namespace namecf {
namespace {

constexpr std::array<std::string_view, kActivityCount> kLongNames = {
    "ENTER_SEARCH", "LINK_SEARCH", "NAME_DETAILS", "LINK_CATEGORY_SEARCH",
    "ADD_FAVORITE"};
constexpr std::array<std::string_view, kActivityCount> kShortCodes = {
    "ES", "LS", "ND", "LCS", "AF"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view to_string(Activity a) {
  return kLongNames[static_cast<std::size_t>(a)];
}

std::string_view short_code(Activity a) {
  return kShortCodes[static_cast<std::size_t>(a)];
}

std::optional<Activity> parse_activity(std::string_view text) {
  for (int k = 0; k < kActivityCount; ++k) {
    if (text == kLongNames[k] || text == kShortCodes[k]) {
      return static_cast<Activity>(k);
    }
  }
  return std::nullopt;
}

ActivityFilter ActivityFilter::parse(std::string_view spec) {
  spec = trim(spec);
  if (spec == "ALL" || spec == "all") return all();
  ActivityFilter filter;
  while (!spec.empty()) {
    auto comma = spec.find(',');
    auto token = trim(spec.substr(0, comma));
    auto activity = parse_activity(token);
    if (!activity) {
      throw UsageError("unknown activity in filter: '" + std::string(token) + "'");
    }
    filter = filter.with(*activity);
    if (comma == std::string_view::npos) break;
    spec.remove_prefix(comma + 1);
  }
  if (filter.empty()) throw UsageError("empty activity filter");
  return filter;
}

std::string ActivityFilter::to_string() const {
  if (*this == all()) return "ALL";
  std::string out;
  for (int k = 0; k < kActivityCount; ++k) {
    if (contains(static_cast<Activity>(k))) {
      if (!out.empty()) out += ',';
      out += kShortCodes[k];
    }
  }
  return out;
}

}  // namespace namecf
