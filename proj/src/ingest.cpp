#include "namecf/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>

#include "namecf/error.hpp"

namespace namecf {
namespace {

std::vector<std::string_view> split_fields(std::string_view line, char delimiter) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

}  // namespace

ColumnMap ColumnMap::parse(std::string_view order) {
  ColumnMap map;
  bool seen[4] = {false, false, false, false};
  std::size_t position = 0;
  while (true) {
    auto comma = order.find(',');
    auto token = order.substr(0, comma);
    std::size_t* slot = nullptr;
    int which = -1;
    if (token == "user") slot = &map.user, which = 0;
    else if (token == "activity") slot = &map.activity, which = 1;
    else if (token == "name") slot = &map.name, which = 2;
    else if (token == "timestamp") slot = &map.timestamp, which = 3;
    if (slot == nullptr) {
      throw UsageError("unknown column '" + std::string(token) +
                       "' (expected user, activity, name, timestamp)");
    }
    if (seen[which]) throw UsageError("duplicate column '" + std::string(token) + "'");
    seen[which] = true;
    *slot = position++;
    if (comma == std::string_view::npos) break;
    order.remove_prefix(comma + 1);
  }
  if (!(seen[0] && seen[1] && seen[2] && seen[3])) {
    throw UsageError("column order must name user, activity, name and timestamp");
  }
  return map;
}

std::size_t ColumnMap::min_fields() const {
  return std::max({user, activity, name, timestamp}) + 1;
}

ParseResult parse_activity_log(std::istream& in, const ColumnMap& columns,
                               char delimiter) {
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;
  const auto needed = columns.min_fields();
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;

    auto fields = split_fields(line, delimiter);
    if (fields.size() < needed) {
      result.rejects.push_back({line_no, "expected " + std::to_string(needed) +
                                             " fields, got " +
                                             std::to_string(fields.size())});
      continue;
    }
    auto user = fields[columns.user];
    auto name = fields[columns.name];
    if (user.empty() || name.empty()) {
      result.rejects.push_back({line_no, "empty user or name"});
      continue;
    }
    auto activity = parse_activity(fields[columns.activity]);
    if (!activity) {
      result.rejects.push_back(
          {line_no, "unknown activity '" + std::string(fields[columns.activity]) + "'"});
      continue;
    }
    auto ts_text = fields[columns.timestamp];
    std::int64_t ts = 0;
    auto [ptr, ec] = std::from_chars(ts_text.data(), ts_text.data() + ts_text.size(), ts);
    if (ec != std::errc() || ptr != ts_text.data() + ts_text.size()) {
      result.rejects.push_back({line_no, "bad timestamp '" + std::string(ts_text) + "'"});
      continue;
    }
    if (ts < 0) {
      result.rejects.push_back({line_no, "negative timestamp"});
      continue;
    }
    result.interactions.push_back(
        Interaction{std::string(user), std::string(name), *activity, ts});
  }
  return result;
}

ParseResult parse_activity_log(const std::filesystem::path& path,
                               const ColumnMap& columns, char delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open activity log: " + path.string());
  return parse_activity_log(in, columns, delimiter);
}

KnownNames KnownNames::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open known-names file: " + path.string());
  std::unordered_set<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tab = line.find('\t');
    if (tab != std::string::npos) line.resize(tab);
    if (line.empty() || line.front() == '#') continue;
    names.insert(line);
  }
  return KnownNames(std::move(names));
}

PreprocessResult preprocess(std::span<const Interaction> rows,
                            const KnownNames& known) {
  PreprocessReport report;
  report.input_rows = rows.size();
  std::vector<Interaction> kept;
  kept.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.activity == Activity::LinkCategorySearch) {
      ++report.dropped_category;
    } else if (!known.contains(row.name)) {
      ++report.dropped_unknown;
    } else {
      kept.push_back(row);
    }
  }
  auto corpus = Corpus::from_interactions(kept);
  report.retained_rows = kept.size();
  report.user_name_pairs = corpus.pair_count();
  report.users = corpus.user_count();
  report.names = corpus.name_count();
  return {std::move(corpus), report};
}

StatsReport compute_stats(const Corpus& corpus) {
  if (corpus.empty()) throw DataError("cannot compute statistics of an empty corpus");
  StatsReport s;
  s.users = corpus.user_count();
  s.names = corpus.name_count();

  std::vector<std::size_t> sizes;
  sizes.reserve(s.users);
  for (const auto& h : corpus.histories()) sizes.push_back(h.names.size());
  std::sort(sizes.begin(), sizes.end());
  for (auto v : sizes) ++s.names_per_user[v];

  auto total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  s.mean_names_per_user = static_cast<double>(total) / static_cast<double>(sizes.size());
  auto mid = sizes.size() / 2;
  s.median_names_per_user =
      sizes.size() % 2 == 1
          ? static_cast<double>(sizes[mid])
          : 0.5 * static_cast<double>(sizes[mid - 1] + sizes[mid]);
  s.min_names_per_user = sizes.front();
  s.max_names_per_user = sizes.back();

  for (NameId i = 0; i < corpus.name_count(); ++i) {
    ++s.users_per_name[corpus.users_of(i).size()];
  }
  return s;
}

void write_histogram(const std::map<std::size_t, std::size_t>& histogram,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write histogram: " + path.string());
  for (const auto& [value, count] : histogram) out << value << '\t' << count << '\n';
}

std::set<std::string> read_id_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open id list: " + path.string());
  std::set<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tab = line.find('\t');
    if (tab != std::string::npos) line.resize(tab);
    if (line.empty() || line.front() == '#') continue;
    ids.insert(line);
  }
  return ids;
}

}  // namespace namecf
