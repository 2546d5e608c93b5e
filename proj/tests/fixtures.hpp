#pragma once

#include <unistd.h>

#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "namecf/corpus.hpp"

namespace namecf::testing {

struct Sequence {
  std::string user;
  std::vector<std::string> names;
  Activity activity = Activity::EnterSearch;
};

/// One interaction per listed name, timestamps increasing in list order.
inline std::vector<Interaction> rows_from(const std::vector<Sequence>& seqs) {
  std::vector<Interaction> rows;
  std::int64_t ts = 1000;
  for (const auto& s : seqs) {
    for (const auto& n : s.names) rows.push_back({s.user, n, s.activity, ts++});
  }
  return rows;
}

inline Corpus corpus_from(const std::vector<Sequence>& seqs) {
  auto rows = rows_from(seqs);
  return Corpus::from_interactions(rows);
}

/// Worked example with three users.
inline Corpus three_user_example() {
  return corpus_from({{"u1", {"i1", "i4", "i2", "i3"}},
                      {"u2", {"i4", "i5", "i1", "i4", "i3"}},
                      {"u3", {"i3", "i5", "i6", "i7", "i4"}}});
}

/// Worked example with five users.
inline Corpus five_user_example() {
  return corpus_from({{"u1", {"i4", "i1", "i4"}},
                      {"u2", {"i1", "i4", "i3"}},
                      {"u3", {"i4", "i5", "i1", "i4", "i3"}},
                      {"u4", {"i3", "i6", "i7", "i4"}},
                      {"u5", {"i1", "i5", "i2"}}});
}

/// Random corpus with at most `max_users` users and `max_names` names and
/// mixed activities.
inline Corpus random_corpus(std::mt19937_64& rng, std::size_t max_users = 10,
                            std::size_t max_names = 10) {
  std::uniform_int_distribution<std::size_t> users_dist(1, max_users);
  std::uniform_int_distribution<std::size_t> names_dist(1, max_names);
  const auto users = users_dist(rng);
  const auto names = names_dist(rng);
  std::uniform_int_distribution<std::size_t> len(1, 8);
  std::uniform_int_distribution<std::size_t> pick(0, names - 1);
  std::uniform_int_distribution<int> act(0, kActivityCount - 1);
  std::vector<Interaction> rows;
  std::int64_t ts = 0;
  for (std::size_t u = 0; u < users; ++u) {
    const auto n = len(rng);
    for (std::size_t k = 0; k < n; ++k) {
      rows.push_back({"u" + std::to_string(u), "n" + std::to_string(pick(rng)),
                      static_cast<Activity>(act(rng)), ts++});
    }
  }
  return Corpus::from_interactions(rows);
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("namecf-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace namecf::testing
