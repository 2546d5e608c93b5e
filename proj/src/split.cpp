#include <algorithm>
#include <fstream>
#include <iostream>

#include "namecf/error.hpp"
#include "namecf/ingest.hpp"

namespace namecf {
namespace {

// Last two distinct names, scanning backwards; nullopt if fewer than two.
std::optional<std::pair<NameId, NameId>> last_two(const UserHistory& h,
                                                  bool enter_search_only) {
  std::optional<NameId> first;
  for (auto it = h.sequence.rbegin(); it != h.sequence.rend(); ++it) {
    if (enter_search_only && it->activity != Activity::EnterSearch) continue;
    if (!first) {
      first = it->name;
    } else if (it->name != *first) {
      return std::pair{*first, it->name};
    }
  }
  return std::nullopt;
}

}  // namespace

EvalSplit split_validation(const Corpus& corpus, SplitMode mode,
                           const std::set<std::string>& relaxed_users) {
  EvalSplit split;
  std::vector<Interaction> train;
  train.reserve(corpus.interaction_count());

  for (UserId u = 0; u < corpus.user_count(); ++u) {
    const auto& user = corpus.user(u);
    const auto& h = corpus.history(u);

    std::optional<std::pair<NameId, NameId>> held;
    if (mode == SplitMode::Strict) {
      held = last_two(h, true);
    } else if (relaxed_users.contains(user)) {
      held = last_two(h, false);
      if (!held) split.skipped.push_back(user);
    }

    for (const auto& e : h.sequence) {
      if (held && (e.name == held->first || e.name == held->second)) continue;
      train.push_back(Interaction{user, corpus.name(e.name), e.activity, e.timestamp});
    }
    if (held) {
      split.targets.emplace(user, TargetPair{corpus.name(held->first),
                                             corpus.name(held->second)});
    }
  }
  for (const auto& user : split.skipped) {
    std::cerr << "warning: relaxed split skips user '" << user
              << "' (fewer than two distinct names)\n";
  }
  // Relaxed users absent from the corpus are skipped too.
  if (mode == SplitMode::Relaxed) {
    for (const auto& user : relaxed_users) {
      if (!corpus.find_user(user)) {
        split.skipped.push_back(user);
        std::cerr << "warning: relaxed split skips unknown user '" << user << "'\n";
      }
    }
    std::sort(split.skipped.begin(), split.skipped.end());
  }
  split.train = Corpus::from_interactions(train);
  return split;
}

namespace {
constexpr std::string_view kSplitHeader = "#namecf-split v1";
}

void write_targets(const Targets& targets, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write split file: " + path.string());
  out << kSplitHeader << '\n';
  for (const auto& [user, pair] : targets) {
    out << user << '\t' << pair.first << '\t' << pair.second << '\n';
  }
}

Targets read_targets(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open split file: " + path.string());
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSplitHeader) throw DataError("not a namecf split file: " + path.string());
  Targets targets;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected user<TAB>name<TAB>name");
    }
    TargetPair pair{line.substr(t1 + 1, t2 - t1 - 1), line.substr(t2 + 1)};
    if (pair.first == pair.second) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": target names must differ");
    }
    targets.emplace(line.substr(0, t1), std::move(pair));
  }
  return targets;
}

}  // namespace namecf
