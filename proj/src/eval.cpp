#include "namecf/eval.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <unordered_set>

#include "namecf/error.hpp"

namespace namecf {

double average_precision_user(const RankedList& list, const TargetPair& targets,
                              std::size_t k) {
  std::unordered_set<std::string_view> seen;
  for (const auto& item : list.items) {
    if (!seen.insert(item.name).second) {
      throw DataError("duplicate name in ranked list: '" + item.name + "'");
    }
  }

  std::size_t found[2] = {0, 0};  // 1-based, 0 = missing
  const std::size_t limit = std::min(k, list.items.size());
  for (std::size_t r = 0; r < limit; ++r) {
    const auto& name = list.items[r].name;
    if (name == targets.first) found[0] = r + 1;
    if (name == targets.second) found[1] = r + 1;
  }

  std::vector<std::size_t> positions;
  for (auto p : found) {
    if (p != 0) positions.push_back(p);
  }
  std::sort(positions.begin(), positions.end());
  std::size_t next_virtual = k + 1;
  while (positions.size() < 2) positions.push_back(next_virtual++);

  // Precision at the i-th hit is i / position.
  const double p1 = 1.0 / static_cast<double>(positions[0]);
  const double p2 = 2.0 / static_cast<double>(positions[1]);
  return (p1 + p2) / 2.0;
}

EvalResult map_at_k(const Run& run, const Targets& targets, std::size_t k) {
  EvalResult result;
  result.k = k;
  const RankedList empty;
  double total = 0.0;
  for (const auto& [user, pair] : targets) {
    const auto* list = run.find(user);
    if (list == nullptr) {
      ++result.missing_users;
      list = &empty;
    }
    const double ap = average_precision_user(*list, pair, k);
    result.per_user.emplace(user, ap);
    total += ap;
  }
  if (result.missing_users > 0) {
    std::cerr << "note: " << result.missing_users << " target users have no list in run '"
              << run.model << "'; scored as empty\n";
  }
  result.map_at_k = targets.empty() ? 0.0 : total / static_cast<double>(targets.size());
  return result;
}

void write_eval_report(const EvalResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write evaluation report: " + path.string());
  for (const auto& [user, ap] : result.per_user) out << user << '\t' << format_score(ap) << '\n';
  out << "MAP\t" << format_score(result.map_at_k) << '\n';
}

}  // namespace namecf
