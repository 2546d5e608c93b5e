#include "namecf/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "namecf/error.hpp"
#include "namecf/ingest.hpp"

namespace namecf {

bool UserHistory::contains(NameId name) const {
  return std::binary_search(names.begin(), names.end(), name);
}

namespace {

template <typename Id>
std::vector<std::string> sorted_unique(std::vector<std::string> values,
                                       std::unordered_map<std::string, Id>& index) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  index.reserve(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    index.emplace(values[k], static_cast<Id>(k));
  }
  return values;
}

}  // namespace

Corpus Corpus::from_interactions(std::span<const Interaction> rows) {
  Corpus c;
  std::vector<std::string> users, names;
  users.reserve(rows.size());
  names.reserve(rows.size());
  for (const auto& row : rows) {
    users.push_back(row.user);
    names.push_back(row.name);
  }
  c.users_ = sorted_unique(std::move(users), c.user_index_);
  c.names_ = sorted_unique(std::move(names), c.name_index_);

  c.histories_.resize(c.users_.size());
  for (const auto& row : rows) {
    auto u = c.user_index_.at(row.user);
    auto i = c.name_index_.at(row.name);
    c.histories_[u].sequence.push_back(Event{i, row.activity, row.timestamp});
  }

  c.inverted_.resize(c.names_.size());
  for (UserId u = 0; u < c.histories_.size(); ++u) {
    auto& h = c.histories_[u];
    std::stable_sort(h.sequence.begin(), h.sequence.end(),
                     [](const Event& a, const Event& b) {
                       return a.timestamp < b.timestamp;
                     });
    h.names.reserve(h.sequence.size());
    for (const auto& e : h.sequence) h.names.push_back(e.name);
    std::sort(h.names.begin(), h.names.end());
    h.names.erase(std::unique(h.names.begin(), h.names.end()), h.names.end());
    for (auto i : h.names) c.inverted_[i].push_back(u);
    c.pair_count_ += h.names.size();
  }
  c.interaction_count_ = rows.size();
  return c;
}

std::optional<UserId> Corpus::find_user(std::string_view user) const {
  auto it = user_index_.find(std::string(user));
  if (it == user_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<NameId> Corpus::find_name(std::string_view name) const {
  auto it = name_index_.find(std::string(name));
  if (it == name_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Interaction> Corpus::interactions() const {
  std::vector<Interaction> rows;
  rows.reserve(interaction_count_);
  for (UserId u = 0; u < histories_.size(); ++u) {
    for (const auto& e : histories_[u].sequence) {
      rows.push_back(Interaction{users_[u], names_[e.name], e.activity, e.timestamp});
    }
  }
  return rows;
}

namespace {
constexpr std::string_view kCorpusHeader = "#namecf-corpus v1";
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write corpus file: " + path.string());
  out << kCorpusHeader << '\n';
  for (UserId u = 0; u < corpus.user_count(); ++u) {
    for (const auto& e : corpus.history(u).sequence) {
      out << corpus.user(u) << '\t' << corpus.name(e.name) << '\t'
          << to_string(e.activity) << '\t' << e.timestamp << '\n';
    }
  }
  if (!out) throw DataError("error writing corpus file: " + path.string());
}

Corpus read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus file: " + path.string());
  std::string header;
  std::getline(in, header);
  if (!header.empty() && header.back() == '\r') header.pop_back();
  if (header != kCorpusHeader) {
    throw DataError("not a namecf corpus file (bad header): " + path.string());
  }
  auto parsed = parse_activity_log(in, ColumnMap::parse("user,name,activity,timestamp"));
  if (!parsed.rejects.empty()) {
    const auto& r = parsed.rejects.front();
    throw DataError(path.string() + ":" + std::to_string(r.line + 1) + ": " + r.reason);
  }
  return Corpus::from_interactions(parsed.interactions);
}

}  // namespace namecf
