#include "namecf/ranked_list.hpp"

#include <unordered_set>

namespace namecf {

std::vector<std::string> RankedList::names() const {
  std::vector<std::string> out;
  out.reserve(items.size());
  for (const auto& item : items) out.push_back(item.name);
  return out;
}

bool RankedList::contains(std::string_view name) const {
  for (const auto& item : items) {
    if (item.name == name) return true;
  }
  return false;
}

bool is_well_formed(const RankedList& list) {
  std::unordered_set<std::string_view> seen;
  for (std::size_t k = 0; k < list.items.size(); ++k) {
    if (!seen.insert(list.items[k].name).second) return false;
    if (k > 0 && list.items[k].score > list.items[k - 1].score) return false;
  }
  return true;
}

}  // namespace namecf
