#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "namecf/ranked_list.hpp"

namespace namecf {

/// The output of one model: per-user lists, and optionally one shared list
/// served to every user without a personal one (non-personalized models).
struct Run {
  std::string model;
  std::map<std::string, RankedList> per_user;
  std::optional<RankedList> shared;

  /// Personal list, else the shared list, else nullptr.
  const RankedList* find(const std::string& user) const;
};

/// Shared list is written under this user key.
inline constexpr const char* kSharedUser = "*";

/// One line per user, `user<TAB>name:score,name:score,...` in rank order,
/// users ascending; a shared list uses the user `*`.
void write_run(const Run& run, const std::filesystem::path& path);
Run read_run(const std::filesystem::path& path);

/// `user<TAB>name,name,...` with at most `limit` names.
void write_submission(const Run& run, const std::filesystem::path& path,
                      std::size_t limit = 1000);

/// Runs keyed by model id.
class RunStore {
 public:
  void add(Run run);
  const Run* find(const std::string& model) const;
  /// Every `*.run` file in the directory; model id is the file stem.
  static RunStore load_dir(const std::filesystem::path& dir);
  std::vector<std::string> models() const;

 private:
  std::map<std::string, Run> runs_;
};

std::string format_score(double score);

}  // namespace namecf
