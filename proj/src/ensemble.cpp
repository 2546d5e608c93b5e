#include "namecf/ensemble.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <regex>
#include <sstream>
#include <unordered_map>

#include "namecf/error.hpp"
#include "namecf/parallel.hpp"

namespace namecf {

RankedList rr_combine(std::span<const RankedList> lists, std::span<const double> alphas,
                      std::size_t n) {
  if (lists.size() != alphas.size()) {
    throw UsageError("rr_combine: " + std::to_string(lists.size()) + " lists but " +
                     std::to_string(alphas.size()) + " weights");
  }
  if (lists.empty()) throw UsageError("rr_combine: no lists");

  std::unordered_map<std::string_view, std::vector<double>> terms;
  for (std::size_t l = 0; l < lists.size(); ++l) {
    const auto& items = lists[l].items;
    for (std::size_t r = 0; r < items.size(); ++r) {
      auto& t = terms[items[r].name];
      t.push_back(alphas[l] / static_cast<double>(r + 1));
    }
  }

  RankedList out;
  out.items.reserve(terms.size());
  for (auto& [name, t] : terms) {
    // Fixed summation order keeps scores independent of list order.
    std::sort(t.begin(), t.end());
    double score = 0.0;
    for (double v : t) score += v;
    out.items.push_back({std::string(name), score});
  }
  auto better = [](const ScoredName& a, const ScoredName& b) {
    return a.score != b.score ? a.score > b.score : a.name < b.name;
  };
  if (out.items.size() > n) {
    std::partial_sort(out.items.begin(), out.items.begin() + n, out.items.end(), better);
    out.items.resize(n);
  } else {
    std::sort(out.items.begin(), out.items.end(), better);
  }
  return out;
}

RankedList fill_up(const RankedList& base, const RankedList& filler, std::size_t n) {
  RankedList out = base;
  if (out.items.size() >= n) return out;
  if (out.items.empty()) {
    for (std::size_t k = 0; k < filler.items.size() && out.items.size() < n; ++k) {
      out.items.push_back(filler.items[k]);
    }
    return out;
  }
  std::unordered_map<std::string_view, char> present;
  for (const auto& item : base.items) present.emplace(item.name, 1);
  const double floor = base.items.back().score;
  double step = 0.0;
  for (const auto& item : filler.items) {
    if (out.items.size() >= n) break;
    if (present.contains(item.name)) continue;
    step += 1.0;
    out.items.push_back({item.name, floor - step});
  }
  return out;
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_args(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(trim(part));
  return out;
}

double parse_weight(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    double w = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return w;
  } catch (const std::exception&) {
    throw DataError(where + ": bad weight '" + text + "'");
  }
}

}  // namespace

EnsembleTree EnsembleTree::parse(const std::string& text) {
  static const std::regex node_re(R"(^([A-Za-z0-9_.\-]+)\s*=\s*([a-z]+)\s*\((.*)\)$)");
  static const std::regex root_re(R"(^root\s*:\s*([A-Za-z0-9_.\-]+)$)");

  EnsembleTree tree;
  std::stringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    auto line = trim(raw);
    if (line.empty()) continue;
    const auto where = "ensemble config line " + std::to_string(line_no);
    std::smatch m;
    if (std::regex_match(line, m, root_re)) {
      tree.root_ = m[1];
      continue;
    }
    if (!std::regex_match(line, m, node_re)) throw DataError(where + ": cannot parse '" + line + "'");

    EnsembleNode node;
    node.name = m[1];
    const std::string kind = m[2];
    auto args = split_args(m[3]);
    if (kind == "leaf") {
      if (args.size() != 1 || args[0].empty()) throw DataError(where + ": leaf takes one model id");
      node.kind = EnsembleNode::Kind::Leaf;
      node.model = args[0];
    } else if (kind == "combine") {
      node.kind = EnsembleNode::Kind::Combine;
      for (const auto& arg : args) {
        auto colon = arg.rfind(':');
        if (colon == std::string::npos) throw DataError(where + ": expected child:weight, got '" + arg + "'");
        node.children.emplace_back(trim(arg.substr(0, colon)),
                                   parse_weight(trim(arg.substr(colon + 1)), where));
      }
      if (node.children.size() < 2) throw DataError(where + ": combine needs at least two children");
      bool positive = false;
      for (const auto& [child, w] : node.children) {
        if (w < 0.0) throw DataError(where + ": negative weight for '" + child + "'");
        positive = positive || w > 0.0;
      }
      if (!positive) throw DataError(where + ": combine needs a positive weight");
    } else if (kind == "fillup") {
      if (args.size() != 3) throw DataError(where + ": fillup takes (base, filler, N)");
      node.kind = EnsembleNode::Kind::FillUp;
      node.base = args[0];
      node.filler = args[1];
      try {
        node.n = std::stoul(args[2]);
      } catch (const std::exception&) {
        throw DataError(where + ": bad list length '" + args[2] + "'");
      }
    } else {
      throw DataError(where + ": unknown node kind '" + kind + "'");
    }
    if (!tree.nodes_.emplace(node.name, node).second) {
      throw DataError(where + ": duplicate node '" + node.name + "'");
    }
  }

  if (tree.root_.empty()) throw DataError("ensemble config: missing 'root: <node>'");
  if (!tree.has_node(tree.root_)) throw DataError("ensemble config: unknown root node '" + tree.root_ + "'");

  // References resolve and the graph is acyclic.
  std::map<std::string, int> state;  // 1 visiting, 2 done
  std::function<void(const std::string&)> visit = [&](const std::string& name) {
    if (!tree.has_node(name)) throw DataError("ensemble config: unknown node '" + name + "'");
    auto& s = state[name];
    if (s == 2) return;
    if (s == 1) throw DataError("ensemble config: cycle through '" + name + "'");
    s = 1;
    const auto& node = tree.nodes_.at(name);
    for (const auto& [child, w] : node.children) visit(child);
    if (node.kind == EnsembleNode::Kind::FillUp) {
      visit(node.base);
      visit(node.filler);
    }
    state[name] = 2;
  };
  for (const auto& [name, node] : tree.nodes_) visit(name);
  return tree;
}

EnsembleTree EnsembleTree::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open ensemble config: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const EnsembleNode& EnsembleTree::node(const std::string& name) const {
  auto it = nodes_.find(name);
  if (it == nodes_.end()) throw DataError("ensemble: unknown node '" + name + "'");
  return it->second;
}

bool EnsembleTree::has_node(const std::string& name) const { return nodes_.contains(name); }

std::set<std::string> EnsembleTree::leaf_models() const {
  std::set<std::string> out;
  for (const auto& [name, node] : nodes_) {
    if (node.kind == EnsembleNode::Kind::Leaf) out.insert(node.model);
  }
  return out;
}

void EnsembleTree::check_models(const std::set<std::string>& models) const {
  for (const auto& model : leaf_models()) {
    if (!models.contains(model)) throw DataError("unknown leaf: " + model);
  }
}

RankedList EnsembleTree::evaluate(const EnsembleNode& node, const std::string& user,
                                  const RunStore& runs, std::size_t n) const {
  switch (node.kind) {
    case EnsembleNode::Kind::Leaf: {
      const auto* run = runs.find(node.model);
      if (run == nullptr) throw DataError("missing run for leaf '" + node.name + "' (model " + node.model + ")");
      const auto* list = run->find(user);
      RankedList out = list ? *list : RankedList{};
      out.source = node.name;
      return out;
    }
    case EnsembleNode::Kind::Combine: {
      std::vector<RankedList> lists;
      std::vector<double> alphas;
      for (const auto& [child, w] : node.children) {
        lists.push_back(evaluate(this->node(child), user, runs, n));
        alphas.push_back(w);
      }
      auto out = rr_combine(lists, alphas, n);
      out.source = node.name;
      return out;
    }
    case EnsembleNode::Kind::FillUp: {
      auto base = evaluate(this->node(node.base), user, runs, n);
      auto filler = evaluate(this->node(node.filler), user, runs, n);
      auto out = fill_up(base, filler, node.n);
      out.source = node.name;
      return out;
    }
  }
  return {};
}

RankedList EnsembleTree::evaluate_user(const std::string& user, const RunStore& runs,
                                       std::size_t n) const {
  return evaluate(root(), user, runs, n);
}

Run evaluate_tree(const EnsembleTree& tree, const RunStore& runs,
                  const std::vector<std::string>& users, std::size_t n,
                  const std::string& output, std::size_t threads) {
  for (const auto& model : tree.leaf_models()) {
    if (runs.find(model) == nullptr) throw DataError("missing run for leaf model '" + model + "'");
  }
  std::vector<RankedList> lists(users.size());
  parallel_for(users.size(), threads,
               [&](std::size_t k) { lists[k] = tree.evaluate_user(users[k], runs, n); });
  Run run;
  run.model = output;
  for (std::size_t k = 0; k < users.size(); ++k) {
    lists[k].source = output;
    run.per_user.insert_or_assign(users[k], std::move(lists[k]));
  }
  return run;
}

std::string default_tree_text() {
  return R"(# Default assembly of the nine model runs.
#
# Weights marked "assumed" have no stated value and default to equal
# weighting.

m0 = leaf(m0)   # N2N-Freq
m1 = leaf(m1)   # N2N-Freq-ES
m2 = leaf(m2)   # N2N-Time
m3 = leaf(m3)   # N2N-Time-ES
m4 = leaf(m4)   # N2N-Time-NoTop5
m5 = leaf(m5)   # N2N-Time-NoTop10
m6 = leaf(m6)   # UB-T
m7 = leaf(m7)   # UB-LL
m8 = leaf(m8)   # PR

E_freq = combine(m0:0.5, m1:0.5)
E_time = combine(m2:0.25, m3:0.25, m4:0.25, m5:0.25)   # m4/m5 weights assumed
E_n2n  = combine(E_freq:0.5, E_time:0.5)                # assumed
E_ub   = combine(m7:0.8, m6:0.2)

# PageRank pads the user-based lists. Alternative reading:
#   E_ubpr = combine(E_ub:0.8, m8:0.2)
E_ubpr = fillup(E_ub, m8, 1000)

final = combine(E_n2n:0.8, E_ubpr:0.2)

root: final
)";
}

}  // namespace namecf
