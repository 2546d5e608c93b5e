#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace namecf {

struct ScoredName {
  std::string name;
  double score = 0.0;

  friend bool operator==(const ScoredName&, const ScoredName&) = default;
};

/// Duplicate-free list ordered by nonincreasing score.
struct RankedList {
  std::string source;  // producing model or node
  std::vector<ScoredName> items;

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
  std::vector<std::string> names() const;
  bool contains(std::string_view name) const;
};

/// Checks uniqueness and nonincreasing scores.
bool is_well_formed(const RankedList& list);

}  // namespace namecf
