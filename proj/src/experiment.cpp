#include "namecf/experiment.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "namecf/ensemble.hpp"
#include "namecf/error.hpp"
#include "namecf/eval.hpp"
#include "namecf/parallel.hpp"

namespace namecf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const ActivityFilter kSearchActivities = ActivityFilter::parse("ES,LS,ND");
const ActivityFilter kEnterSearch = ActivityFilter::parse("ES");

ModelSpec n2n_model(std::string id, std::string description, SeedBias bias,
                    ActivityFilter filter, std::size_t exclude, std::size_t n) {
  ModelSpec m;
  m.id = std::move(id);
  m.description = std::move(description);
  m.kind = ModelKind::NameToName;
  m.bag.filter = filter;
  m.bag.exclude_top_k = exclude;
  m.n2n.bias = bias;
  m.n2n.seed_filter = filter;
  m.n2n.n = n;
  return m;
}

ModelSpec base_model(const std::string& id, std::size_t n) {
  if (id == "m0") return n2n_model(id, "N2N-Freq", SeedBias::Frequency, kSearchActivities, 0, n);
  if (id == "m1") return n2n_model(id, "N2N-Freq-ES", SeedBias::Frequency, kEnterSearch, 0, n);
  if (id == "m2") return n2n_model(id, "N2N-Time", SeedBias::Recency, kSearchActivities, 0, n);
  if (id == "m3") return n2n_model(id, "N2N-Time-ES", SeedBias::Recency, kEnterSearch, 0, n);
  if (id == "m4") return n2n_model(id, "N2N-Time-NoTop5", SeedBias::Recency, kSearchActivities, 5, n);
  if (id == "m5") return n2n_model(id, "N2N-Time-NoTop10", SeedBias::Recency, kSearchActivities, 10, n);
  ModelSpec m;
  m.id = id;
  if (id == "m6" || id == "m7") {
    m.kind = ModelKind::UserBased;
    m.description = id == "m6" ? "UB-T" : "UB-LL";
    m.ub.similarity = id == "m6" ? Similarity::Tanimoto : Similarity::LogLikelihood;
    m.ub.k = 100;
    m.ub.n = n;
    return m;
  }
  if (id == "m8") {
    m.kind = ModelKind::PageRank;
    m.description = "PR";
    m.bag.filter = kSearchActivities;
    return m;
  }
  if (id == "baseline") {
    m.kind = ModelKind::MostPopular;
    m.description = "Most Popular Names";
    return m;
  }
  throw UsageError("unknown model id '" + id + "'");
}

}  // namespace

std::uint64_t model_seed(std::uint64_t global_seed, const std::string& id) {
  return user_seed(global_seed, "model:" + id);
}

ModelSpec default_model(const std::string& id, std::size_t n, std::uint64_t global_seed) {
  auto m = base_model(id, n);
  m.n = n;
  m.n2n.n = n;
  m.ub.n = n;
  m.n2n.seed = model_seed(global_seed, id);
  return m;
}

std::vector<ModelSpec> default_models(std::size_t n, std::uint64_t global_seed) {
  std::vector<ModelSpec> models;
  for (const char* id : {"m0", "m1", "m2", "m3", "m4", "m5", "m6", "m7", "m8"}) {
    models.push_back(default_model(id, n, global_seed));
  }
  return models;
}

namespace {

std::string kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::NameToName: return "n2n";
    case ModelKind::UserBased: return "ub";
    case ModelKind::PageRank: return "pagerank";
    case ModelKind::MostPopular: return "popular";
  }
  return "";
}

ModelKind parse_kind(const std::string& s) {
  if (s == "n2n") return ModelKind::NameToName;
  if (s == "ub") return ModelKind::UserBased;
  if (s == "pagerank") return ModelKind::PageRank;
  if (s == "popular") return ModelKind::MostPopular;
  throw DataError("unknown model kind '" + s + "'");
}

json model_to_json(const ModelSpec& m) {
  json j{{"id", m.id}, {"description", m.description}, {"kind", kind_name(m.kind)}};
  if (m.kind == ModelKind::NameToName || m.kind == ModelKind::PageRank) {
    j["activities"] = m.bag.filter.to_string();
    j["exclude_top"] = m.bag.exclude_top_k;
    j["popularity"] =
        m.bag.measure == PopularityMeasure::DistinctUsers ? "users" : "interactions";
  }
  if (m.kind == ModelKind::NameToName) {
    j["bias"] = m.n2n.bias == SeedBias::Frequency ? "frequency" : "recency";
    j["seed_activities"] = m.n2n.seed_filter.to_string();
    j["max_iterations"] = m.n2n.max_iterations;
    j["decay"] = m.n2n.recency_decay;
    j["seed"] = m.n2n.seed;
  }
  if (m.kind == ModelKind::UserBased) {
    j["similarity"] = m.ub.similarity == Similarity::Tanimoto ? "tanimoto" : "loglikelihood";
    j["k"] = m.ub.k;
  }
  if (m.kind == ModelKind::PageRank) {
    j["damping"] = m.pr.damping;
    j["epsilon"] = m.pr.epsilon;
    j["max_iter"] = m.pr.max_iter;
    j["weighted"] = m.pr.weighted;
  }
  return j;
}

ModelSpec model_from_json(const json& j, std::size_t n, std::uint64_t global_seed) {
  const auto id = j.at("id").get<std::string>();
  ModelSpec m;
  try {
    m = default_model(id, n, global_seed);
  } catch (const UsageError&) {
    if (!j.contains("kind")) throw DataError("model '" + id + "' needs a 'kind'");
    m.id = id;
  }
  if (j.contains("kind")) m.kind = parse_kind(j["kind"].get<std::string>());
  if (j.contains("description")) m.description = j["description"].get<std::string>();
  if (j.contains("activities")) {
    m.bag.filter = ActivityFilter::parse(j["activities"].get<std::string>());
    m.n2n.seed_filter = m.bag.filter;
  }
  if (j.contains("seed_activities")) {
    m.n2n.seed_filter = ActivityFilter::parse(j["seed_activities"].get<std::string>());
  }
  if (j.contains("exclude_top")) m.bag.exclude_top_k = j["exclude_top"].get<std::size_t>();
  if (j.contains("popularity")) {
    m.bag.measure = j["popularity"].get<std::string>() == "interactions"
                        ? PopularityMeasure::Interactions
                        : PopularityMeasure::DistinctUsers;
  }
  if (j.contains("bias")) {
    m.n2n.bias = j["bias"].get<std::string>() == "recency" ? SeedBias::Recency : SeedBias::Frequency;
  }
  if (j.contains("max_iterations")) m.n2n.max_iterations = j["max_iterations"].get<std::size_t>();
  if (j.contains("decay")) m.n2n.recency_decay = j["decay"].get<double>();
  if (j.contains("seed")) m.n2n.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("similarity")) {
    m.ub.similarity = j["similarity"].get<std::string>() == "loglikelihood"
                          ? Similarity::LogLikelihood
                          : Similarity::Tanimoto;
  }
  if (j.contains("k")) m.ub.k = j["k"].get<std::size_t>();
  if (j.contains("damping")) m.pr.damping = j["damping"].get<double>();
  if (j.contains("epsilon")) m.pr.epsilon = j["epsilon"].get<double>();
  if (j.contains("max_iter")) m.pr.max_iter = j["max_iter"].get<std::size_t>();
  if (j.contains("weighted")) m.pr.weighted = j["weighted"].get<bool>();
  m.n = n;
  m.n2n.n = n;
  m.ub.n = n;
  return m;
}

}  // namespace

ExperimentConfig ExperimentConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open experiment config: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("experiment config " + path.string() + ": " + e.what());
  }
  const auto base = path.parent_path();
  auto resolve = [&](const std::string& p) -> fs::path {
    if (p.empty()) return {};
    fs::path q(p);
    return q.is_absolute() ? q : base / q;
  };

  ExperimentConfig c;
  try {
    if (j.contains("log")) c.log = resolve(j["log"].get<std::string>());
    if (j.contains("known")) c.known = resolve(j["known"].get<std::string>());
    if (j.contains("corpus")) c.corpus = resolve(j["corpus"].get<std::string>());
    if (j.contains("columns")) c.columns = j["columns"].get<std::string>();
    if (j.contains("split")) {
      const auto& s = j["split"];
      if (s.contains("mode")) {
        const auto mode = s["mode"].get<std::string>();
        if (mode == "strict") c.split_mode = SplitMode::Strict;
        else if (mode == "relaxed") c.split_mode = SplitMode::Relaxed;
        else throw DataError("unknown split mode '" + mode + "'");
      }
      if (s.contains("relaxed_users")) c.relaxed_users = resolve(s["relaxed_users"].get<std::string>());
    }
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("n")) c.n = j["n"].get<std::size_t>();
    if (j.contains("k")) c.k = j["k"].get<std::size_t>();
    c.out_dir = resolve(j.contains("out_dir") ? j["out_dir"].get<std::string>() : c.out_dir.string());
    if (j.contains("tree")) c.tree = resolve(j["tree"].get<std::string>());
    if (j.contains("cache")) c.use_cache = j["cache"].get<bool>();
    c.models.clear();
    if (j.contains("models")) {
      for (const auto& m : j["models"]) c.models.push_back(model_from_json(m, c.n, c.seed));
    } else {
      for (const char* id : {"m0", "m1", "m2", "m3", "m4", "m5", "m6", "m7", "m8"}) {
        c.models.push_back(model_from_json(json{{"id", id}}, c.n, c.seed));
      }
    }
  } catch (const json::exception& e) {
    throw DataError("experiment config " + path.string() + ": " + e.what());
  }
  return c;
}

std::string ExperimentConfig::to_json() const {
  json j;
  j["log"] = log.string();
  j["known"] = known.string();
  j["corpus"] = corpus.string();
  j["columns"] = columns;
  j["split"] = {{"mode", split_mode == SplitMode::Strict ? "strict" : "relaxed"},
                {"relaxed_users", relaxed_users.string()}};
  j["seed"] = seed;
  j["n"] = n;
  j["k"] = k;
  j["out_dir"] = out_dir.string();
  j["tree"] = tree.string();
  j["cache"] = use_cache;
  j["models"] = json::array();
  for (const auto& m : models) j["models"].push_back(model_to_json(m));
  return j.dump(2) + "\n";
}

double ExperimentReport::map_of(const std::string& id) const {
  for (const auto& r : rows) {
    if (r.id == id) return r.map;
  }
  throw UsageError("no report row '" + id + "'");
}

Run run_model(const ModelSpec& spec, const Corpus& train,
              const std::vector<std::string>& users, std::size_t threads,
              const CooccurrenceBag* bag) {
  Run run;
  run.model = spec.id;

  std::optional<CooccurrenceBag> own_bag;
  if ((spec.kind == ModelKind::NameToName || spec.kind == ModelKind::PageRank) && bag == nullptr) {
    own_bag = build_bag(train, spec.bag, threads);
    bag = &*own_bag;
  }

  switch (spec.kind) {
    case ModelKind::NameToName: {
      N2NModel model(train, *bag, spec.n2n);
      std::vector<RankedList> lists(users.size());
      parallel_for(users.size(), threads, [&](std::size_t k) {
        if (auto u = train.find_user(users[k])) lists[k] = model.recommend(*u);
      });
      for (std::size_t k = 0; k < users.size(); ++k) {
        lists[k].source = spec.id;
        run.per_user.insert_or_assign(users[k], std::move(lists[k]));
      }
      break;
    }
    case ModelKind::UserBased: {
      std::vector<RankedList> lists(users.size());
      parallel_for(users.size(), threads, [&](std::size_t k) {
        if (auto u = train.find_user(users[k])) lists[k] = ub_recommend(*u, train, spec.ub);
      });
      for (std::size_t k = 0; k < users.size(); ++k) {
        lists[k].source = spec.id;
        run.per_user.insert_or_assign(users[k], std::move(lists[k]));
      }
      break;
    }
    case ModelKind::PageRank: {
      RankedList shared;
      auto graph = Graph::from_bag(*bag);
      if (graph.vertex_count() > 0) {
        auto result = pagerank(graph, spec.pr);
        if (!result.converged) {
          std::cerr << "warning: PageRank did not converge in " << result.iterations
                    << " iterations\n";
        }
        shared = std::move(result.ranking);
      }
      if (shared.items.size() > spec.n) shared.items.resize(spec.n);
      shared.source = spec.id;
      run.shared = std::move(shared);
      break;
    }
    case ModelKind::MostPopular: {
      RankedList shared;
      shared.source = spec.id;
      for (const auto& p : popularity(train, spec.bag.measure)) {
        if (shared.items.size() >= spec.n) break;
        shared.items.push_back({train.name(p.name), static_cast<double>(p.count)});
      }
      run.shared = std::move(shared);
      break;
    }
  }
  return run;
}

namespace {

std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int k = 15; k >= 0; --k, v >>= 4) out[k] = digits[v & 0xF];
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename F>
auto stage(const std::string& name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config, std::size_t threads) {
  threads = std::max<std::size_t>(1, threads);
  ExperimentReport report;
  const fs::path out = config.out_dir;

  stage("setup", [&] {
    for (const auto& dir : {out, out / "bags", out / "runs", out / "eval"}) fs::create_directories(dir);
    if (config.use_cache) fs::create_directories(out / "cache");
    std::ofstream(out / "config.json", std::ios::binary) << config.to_json();
  });

  // Validate the tree before any expensive stage.
  auto tree = stage("ensemble", [&] {
    auto t = config.tree.empty() ? EnsembleTree::parse(default_tree_text())
                                 : EnsembleTree::load(config.tree);
    std::set<std::string> ids;
    for (const auto& m : config.models) ids.insert(m.id);
    t.check_models(ids);
    return t;
  });

  auto corpus = stage("ingest", [&] {
    if (!config.corpus.empty()) {
      auto c = read_corpus(config.corpus);
      report.preprocess.input_rows = report.preprocess.retained_rows = c.interaction_count();
      report.preprocess.user_name_pairs = c.pair_count();
      report.preprocess.users = c.user_count();
      report.preprocess.names = c.name_count();
      return c;
    }
    if (config.log.empty() || config.known.empty()) {
      throw UsageError("either 'corpus' or both 'log' and 'known' are required");
    }
    auto parsed = parse_activity_log(config.log, ColumnMap::parse(config.columns));
    if (!parsed.rejects.empty()) {
      std::cerr << "note: " << parsed.rejects.size() << " malformed log rows rejected\n";
    }
    auto result = preprocess(parsed.interactions, KnownNames::load(config.known));
    report.preprocess = result.report;
    write_corpus(result.corpus, out / "corpus.txt");
    return std::move(result.corpus);
  });

  auto split = stage("split", [&] {
    std::set<std::string> relaxed;
    if (!config.relaxed_users.empty()) relaxed = read_id_list(config.relaxed_users);
    auto s = split_validation(corpus, config.split_mode, relaxed);
    write_corpus(s.train, out / "train.txt");
    write_targets(s.targets, out / "split.tsv");
    return s;
  });
  const auto& train = split.train;
  std::vector<std::string> users;
  for (const auto& [user, pair] : split.targets) users.push_back(user);
  report.target_users = users.size();
  report.k = config.k;

  const std::uint64_t train_hash = fnv1a(read_file(out / "train.txt"));
  auto cache_path = [&](const std::string& kind, const std::string& key) {
    return out / "cache" / (kind + "-" + hex(fnv1a(key, train_hash)) + "." + kind);
  };

  // Bags shared between models with the same spec.
  std::map<std::string, CooccurrenceBag> bags;
  stage("bags", [&] {
    for (const auto& m : config.models) {
      if (m.kind != ModelKind::NameToName && m.kind != ModelKind::PageRank) continue;
      const auto key = m.bag.to_string();
      if (bags.contains(key)) continue;
      const auto cached = cache_path("bag", key);
      CooccurrenceBag bag;
      if (config.use_cache && fs::exists(cached)) {
        bag = read_bag(cached, train);
      } else {
        bag = build_bag(train, m.bag, threads);
        if (config.use_cache) write_bag(bag, cached);
      }
      write_bag(bag, out / "bags" / (m.id + ".bag"));
      bags.emplace(key, std::move(bag));
    }
  });

  RunStore store;
  auto produce = [&](const ModelSpec& m) {
    return stage("model " + m.id, [&] {
      const auto cached = cache_path("run", model_to_json(m).dump());
      Run run;
      if (config.use_cache && fs::exists(cached)) {
        run = read_run(cached);
        run.model = m.id;
      } else {
        const CooccurrenceBag* bag = nullptr;
        if (auto it = bags.find(m.bag.to_string()); it != bags.end()) bag = &it->second;
        run = run_model(m, train, users, threads, bag);
        if (config.use_cache) write_run(run, cached);
      }
      write_run(run, out / "runs" / (m.id + ".run"));
      return run;
    });
  };
  for (const auto& m : config.models) store.add(produce(m));
  const auto baseline_spec = default_model("baseline", config.n, config.seed);
  store.add(produce(baseline_spec));

  stage("ensemble", [&] {
    auto run = evaluate_tree(tree, store, users, config.n, "ensemble", threads);
    write_run(run, out / "runs" / "ensemble.run");
    write_submission(run, out / "runs" / "ensemble.submission.tsv", config.n);
  });

  stage("evaluate", [&] {
    auto score = [&](const std::string& id, const std::string& description) {
      // Scored from the written run file so the report matches a standalone
      // evaluation of the same file.
      auto run = read_run(out / "runs" / (id + ".run"));
      auto result = map_at_k(run, split.targets, config.k);
      write_eval_report(result, out / "eval" / (id + ".tsv"));
      report.rows.push_back({id, description, result.map_at_k});
    };
    for (const auto& m : config.models) score(m.id, m.description);
    score("ensemble", "Final ensemble");
    score("baseline", baseline_spec.description);
    write_report(report, out / "report.tsv");
  });
  return report;
}

void write_report(const ExperimentReport& report, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write report: " + path.string());
  out << "model\tdescription\tMAP@" << report.k << '\n';
  for (const auto& r : report.rows) {
    out << r.id << '\t' << r.description << '\t' << format_score(r.map) << '\n';
  }
}

}  // namespace namecf
