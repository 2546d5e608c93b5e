#include "namecf/runs.hpp"

#include <charconv>
#include <fstream>

#include "namecf/error.hpp"

namespace namecf {

const RankedList* Run::find(const std::string& user) const {
  auto it = per_user.find(user);
  if (it != per_user.end()) return &it->second;
  return shared ? &*shared : nullptr;
}

std::string format_score(double score) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, score);
  return std::string(buf, ptr);
}

namespace {

void write_line(std::ostream& out, const std::string& user, const RankedList& list) {
  out << user << '\t';
  for (std::size_t k = 0; k < list.items.size(); ++k) {
    const auto& item = list.items[k];
    if (item.name.find_first_of(",\t\n") != std::string::npos) {
      throw DataError("name cannot be written to a run file: '" + item.name + "'");
    }
    if (k > 0) out << ',';
    out << item.name << ':' << format_score(item.score);
  }
  out << '\n';
}

RankedList parse_list(std::string_view text, const std::string& where) {
  RankedList list;
  while (!text.empty()) {
    auto comma = text.find(',');
    auto token = text.substr(0, comma);
    auto colon = token.rfind(':');
    double score = 0.0;
    bool ok = colon != std::string_view::npos && colon > 0;
    if (ok) {
      auto value = token.substr(colon + 1);
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), score);
      ok = ec == std::errc() && ptr == value.data() + value.size();
    }
    if (!ok) throw DataError(where + ": bad entry '" + std::string(token) + "'");
    list.items.push_back({std::string(token.substr(0, colon)), score});
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return list;
}

}  // namespace

void write_run(const Run& run, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write run file: " + path.string());
  if (run.shared) write_line(out, kSharedUser, *run.shared);
  for (const auto& [user, list] : run.per_user) write_line(out, user, list);
  if (!out) throw DataError("error writing run file: " + path.string());
}

Run read_run(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open run file: " + path.string());
  Run run;
  run.model = path.stem().string();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto where = path.string() + ":" + std::to_string(line_no);
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) throw DataError(where + ": expected user<TAB>list");
    auto user = line.substr(0, tab);
    auto list = parse_list(std::string_view(line).substr(tab + 1), where);
    list.source = run.model;
    if (user == kSharedUser) {
      run.shared = std::move(list);
    } else if (!run.per_user.emplace(user, std::move(list)).second) {
      throw DataError(where + ": duplicate user '" + user + "'");
    }
  }
  return run;
}

void write_submission(const Run& run, const std::filesystem::path& path, std::size_t limit) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write submission: " + path.string());
  for (const auto& [user, list] : run.per_user) {
    out << user << '\t';
    const auto count = std::min(limit, list.items.size());
    for (std::size_t k = 0; k < count; ++k) {
      if (k > 0) out << ',';
      out << list.items[k].name;
    }
    out << '\n';
  }
}

void RunStore::add(Run run) {
  auto model = run.model;
  runs_.insert_or_assign(std::move(model), std::move(run));
}

const Run* RunStore::find(const std::string& model) const {
  auto it = runs_.find(model);
  return it == runs_.end() ? nullptr : &it->second;
}

RunStore RunStore::load_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw DataError("not a run directory: " + dir.string());
  RunStore store;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".run") {
      store.add(read_run(entry.path()));
    }
  }
  return store;
}

std::vector<std::string> RunStore::models() const {
  std::vector<std::string> out;
  for (const auto& [model, run] : runs_) out.push_back(model);
  return out;
}

}  // namespace namecf
