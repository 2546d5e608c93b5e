// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "namecf/cooccur.hpp"
#include "namecf/ensemble.hpp"
#include "namecf/eval.hpp"
#include "namecf/experiment.hpp"
#include "namecf/ingest.hpp"
#include "namecf/neighborhood.hpp"
#include "namecf/pagerank.hpp"
#include "namecf/parallel.hpp"
#include "namecf/synth.hpp"
#include "oracles.hpp"

using namespace namecf;
using namespace namecf::testing;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and budgets.
constexpr double kApTolerance = 1e-12;
constexpr double kPrSumTolerance = 1e-9;
constexpr double kPrSolveTolerance = 1e-8;
constexpr double kLiftRequired = 1.20;
constexpr double kC1Seconds = 1.0;
constexpr double kC2Seconds = 10.0;
constexpr double kC7Seconds = 60.0;

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (detail.empty()) detail = what;
    }
  }
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (!out.pass) ++failures;
  std::printf("%s criterion %d: %s (%.2fs)%s%s\n", out.pass ? "PASS" : "FAIL", id, title.c_str(), secs,
              out.detail.empty() ? "" : " - ", out.detail.c_str());
  std::fflush(stdout);
}

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

using Entry = std::vector<std::pair<std::string, std::uint32_t>>;

Entry entry_of(const CooccurrenceBag& bag, const std::string& name) {
  Entry out;
  if (auto id = bag.find_name(name)) {
    for (const auto& c : bag.entry(*id)) out.emplace_back(bag.name(c.name), c.multiplicity);
  }
  return out;
}

RankedList list_of(const std::vector<std::string>& names) {
  RankedList l;
  double s = static_cast<double>(names.size());
  for (const auto& n : names) l.items.push_back({n, s--});
  return l;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion1() {
  Outcome o;
  const auto start = Clock::now();
  auto a = build_bag(three_user_example(), {});
  o.require(entry_of(a, "i4") == Entry{{"i3", 3}, {"i1", 2}, {"i5", 2}, {"i2", 1}, {"i6", 1}, {"i7", 1}},
            "three-user C(i4) mismatch");
  auto b = build_bag(five_user_example(), {ActivityFilter::parse("ES,LS,ND"), 0});
  o.require(entry_of(b, "i4") == Entry{{"i1", 3}, {"i3", 3}, {"i5", 1}, {"i6", 1}, {"i7", 1}},
            "five-user C(i4) mismatch");
  o.require(entry_of(b, "i1") == Entry{{"i4", 3}, {"i3", 2}, {"i5", 2}, {"i2", 1}},
            "five-user C(i1) mismatch");
  o.require(seconds_since(start) < kC1Seconds, "over time budget");
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937_64 rng(20240101);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  const ActivityFilter filters[] = {ActivityFilter::all(), ActivityFilter::parse("ES,LS,ND")};
  for (int trial = 0; trial < 100; ++trial) {
    auto c = random_corpus(rng, 10, 10);
    const auto filter = filters[trial % 2];
    const std::size_t exclude = c.name_count() > 1 ? static_cast<std::size_t>(trial % 2) : 0;

    auto bag = build_bag(c, {filter, exclude});
    std::map<std::pair<std::string, std::string>, std::size_t> got;
    for (NameId i = 0; i < bag.name_count(); ++i) {
      for (const auto& co : bag.entry(i)) {
        if (i < co.name) got[{bag.name(i), bag.name(co.name)}] = co.multiplicity;
      }
    }
    o.require(got == oracle::bag(c, filter, exclude), "bag differs from oracle");

    for (bool llr : {false, true}) {
      const std::size_t k = 1 + static_cast<std::size_t>(trial % 4);
      const UBConfig cfg{llr ? Similarity::LogLikelihood : Similarity::Tanimoto, k, 10};
      for (UserId u = 0; u < c.user_count(); ++u) {
        auto r = ub_recommend(u, c, cfg);
        auto want = oracle::user_based(c, c.user(u), llr, k, 10);
        bool same = r.size() == want.size();
        for (std::size_t p = 0; same && p < want.size(); ++p) {
          same = r.items[p].name == want[p].first &&
                 std::abs(r.items[p].score - want[p].second) <= 1e-12 * std::max(1.0, std::abs(want[p].second));
        }
        o.require(same, std::string("user-based ") + (llr ? "LLR" : "Tanimoto") + " differs from oracle");
      }
    }

    auto names = c.names();
    std::vector<RankedList> lists;
    std::vector<std::vector<std::string>> raw;
    std::vector<double> alphas;
    for (int l = 0; l < 3; ++l) {
      std::vector<std::string> v(names.begin(), names.end());
      std::shuffle(v.begin(), v.end(), rng);
      v.resize(std::uniform_int_distribution<std::size_t>(0, v.size())(rng));
      raw.push_back(v);
      lists.push_back(list_of(v));
      alphas.push_back(weight(rng));
    }
    auto fused = rr_combine(lists, alphas, 10);
    auto want = oracle::rr_fusion(raw, alphas, 10);
    bool same = fused.size() == want.size();
    for (std::size_t p = 0; same && p < want.size(); ++p) {
      same = fused.items[p].name == want[p].first && fused.items[p].score == want[p].second;
    }
    o.require(same, "rr_combine differs from oracle");

    if (names.size() >= 2) {
      const std::size_t k = 1 + static_cast<std::size_t>(trial % 12);
      for (const auto& l : raw) {
        const double ap = average_precision_user(list_of(l), {names[0], names[1]}, k);
        const double ref = oracle::average_precision(l, names[0], names[1], k);
        o.require(std::abs(ap - ref) <= kApTolerance, "AP differs from oracle");
      }
    }
  }
  o.require(seconds_since(start) < kC2Seconds, "over time budget");
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::vector<RankedList> pair{list_of({"a", "b"}), list_of({"b", "a"})};
  std::vector<double> alphas{0.8, 0.2};
  auto out = rr_combine(pair, alphas, 10);
  o.require(out.names() == std::vector<std::string>{"a", "b"}, "worked example order");
  o.require(out.size() == 2 && std::abs(out.items[0].score - 0.9) < 1e-15 &&
                std::abs(out.items[1].score - 0.6) < 1e-15,
            "worked example scores");

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> w(0.01, 1.0);
  std::vector<std::string> pool;
  for (int i = 0; i < 12; ++i) pool.push_back("n" + std::to_string(i));
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<RankedList> lists;
    std::vector<double> a;
    for (int l = 0; l < 3; ++l) {
      auto v = pool;
      std::shuffle(v.begin(), v.end(), rng);
      v.resize(std::uniform_int_distribution<std::size_t>(2, v.size())(rng));
      std::erase(v, "n0");
      std::erase(v, "n1");
      v.insert(v.begin() + static_cast<long>(std::uniform_int_distribution<std::size_t>(0, v.size())(rng)), {"n0", "n1"});
      lists.push_back(list_of(v));
      a.push_back(w(rng));
    }
    auto base = rr_combine(lists, a, 100);
    std::vector<double> scaled;
    for (double x : a) scaled.push_back(x * 3.7);
    o.require(rr_combine(lists, scaled, 100).names() == base.names(), "scaling changed the ranking");
    auto names = base.names();
    o.require(std::find(names.begin(), names.end(), "n0") < std::find(names.begin(), names.end(), "n1"),
              "unanimity violated");
  }
  return o;
}

Outcome criterion4() {
  Outcome o;
  const double perfect = average_precision_user(list_of({"a", "b", "c"}), {"a", "b"}, 1000);
  const double mid = average_precision_user(list_of({"x", "a", "y", "z", "b"}), {"a", "b"}, 1000);
  const double floor = average_precision_user(list_of({}), {"a", "b"}, 1000);
  o.require(std::abs(perfect - 1.0) <= kApTolerance, "ranks (1,2)");
  o.require(std::abs(mid - 0.45) <= kApTolerance, "ranks (2,5)");
  o.require(std::abs(floor - (1.0 / 1001.0 + 2.0 / 1002.0) / 2.0) <= kApTolerance, "both missing");
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::vector<WeightedEdge> one{{"a", "b", 1.0}};
  auto two = pagerank(Graph::from_edges({}, one));
  o.require(std::abs(two.scores[0] - 0.5) <= 1e-12 && std::abs(two.scores[1] - 0.5) <= 1e-12,
            "2-node graph");

  std::vector<WeightedEdge> path{{"a", "b", 1.0}, {"b", "c", 1.0}};
  auto p = pagerank(Graph::from_edges({}, path));
  auto x = oracle::pagerank_direct({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}, 0.85);
  for (std::size_t v = 0; v < 3; ++v) {
    o.require(std::abs(p.scores[v] - x[v]) <= kPrSolveTolerance, "path differs from direct solve");
  }

  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.2);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<WeightedEdge> edges;
    std::vector<std::string> vertices;
    for (int v = 0; v < 30; ++v) vertices.push_back("v" + std::to_string(v));
    for (int a = 0; a < 30; ++a) {
      for (int b = a + 1; b < 30; ++b) {
        if (coin(rng)) edges.push_back({vertices[a], vertices[b], 1.0 + static_cast<double>(rng() % 5)});
      }
    }
    for (auto r : {pagerank(Graph::from_edges(vertices, edges)), two, p}) {
      double s = 0.0;
      for (double v : r.scores) s += v;
      o.require(std::abs(s - 1.0) <= kPrSumTolerance, "scores do not sum to 1");
    }
  }
  return o;
}

ExperimentConfig synthetic_config(const fs::path& dir, const SynthParams& params) {
  fs::create_directories(dir);
  write_synthetic(params, dir / "log.tsv", dir / "known.txt");
  ExperimentConfig config;
  config.log = dir / "log.tsv";
  config.known = dir / "known.txt";
  config.seed = 42;
  config.models = default_models(config.n, config.seed);
  config.use_cache = false;
  return config;
}

Outcome criterion6(const fs::path& scratch) {
  Outcome o;
  SynthParams params;
  auto config = synthetic_config(scratch / "c6", params);
  const std::size_t threads[] = {1, 3, 1};
  std::vector<fs::path> outs;
  for (std::size_t r = 0; r < 3; ++r) {
    config.out_dir = scratch / "c6" / ("out" + std::to_string(r));
    run_experiment(config, threads[r]);
    outs.push_back(config.out_dir);
  }
  std::size_t compared = 0;
  for (const char* sub : {"runs", "eval", "bags"}) {
    for (const auto& f : fs::directory_iterator(outs[0] / sub)) {
      const auto name = f.path().filename();
      for (std::size_t r = 1; r < outs.size(); ++r) {
        o.require(slurp(f.path()) == slurp(outs[r] / sub / name),
                  std::string(sub) + "/" + name.string() + " differs between runs");
      }
      ++compared;
    }
  }
  for (std::size_t r = 1; r < outs.size(); ++r) {
    o.require(slurp(outs[0] / "report.tsv") == slurp(outs[r] / "report.tsv"), "report differs");
  }
  o.require(compared >= 20, "too few artifacts compared");
  o.detail = o.pass ? std::to_string(compared) + " artifacts identical across 1/3/1 threads" : o.detail;
  return o;
}

Outcome criterion7(const fs::path& scratch) {
  Outcome o;
  const auto start = Clock::now();
  SynthParams params;
  params.clusters = 2;
  params.users = 200;
  params.noise = 0.2;
  params.zipf_exponent = 0.0;
  auto config = synthetic_config(scratch / "c7", params);
  config.out_dir = scratch / "c7" / "out";
  auto report = run_experiment(config, resolve_threads());
  const double ensemble = report.map_of("ensemble");
  const double baseline = report.map_of("baseline");
  const double lift = ensemble / baseline;
  o.require(lift >= kLiftRequired, "lift below threshold");
  o.require(seconds_since(start) < kC7Seconds, "over time budget");
  char buf[160];
  std::snprintf(buf, sizeof buf, "ensemble %.6f, baseline %.6f, lift %.3f", ensemble, baseline, lift);
  o.detail = o.pass ? buf : o.detail + " (" + buf + ")";
  return o;
}

// Real-dataset replication. Runs only when the log and known-names files are
// supplied through NAMECF_REAL_LOG and NAMECF_REAL_KNOWN.
Outcome criterion8(const fs::path& scratch, const char* log, const char* known) {
  Outcome o;
  auto parsed = parse_activity_log(log);
  auto pre = preprocess(parsed.interactions, KnownNames::load(known));
  auto stats = compute_stats(pre.corpus);
  const auto& r = pre.report;
  o.require(r.user_name_pairs == 260236 || r.retained_rows == 260236, "pair count");
  o.require(r.users == 60922, "user count");
  o.require(r.names == 17467, "name count");
  o.require(std::abs(stats.mean_names_per_user - 4.35) < 0.005, "mean names per user");
  o.require(stats.median_names_per_user == 3.0, "median names per user");
  o.require(stats.min_names_per_user == 1, "min names per user");
  o.require(stats.max_names_per_user == 1670, "max names per user");

  ExperimentConfig config;
  config.log = log;
  config.known = known;
  config.out_dir = scratch / "c8";
  config.use_cache = false;
  auto report = run_experiment(config, resolve_threads());
  const double baseline = report.map_of("baseline");
  const double ensemble = report.map_of("ensemble");
  for (const auto& row : report.rows) {
    if (row.id.size() == 2 && row.id[0] == 'm' && row.id[1] <= '5') {
      o.require(row.map > baseline, row.id + " not above baseline");
    }
    if (row.id != "ensemble") o.require(ensemble > row.map, "ensemble not above " + row.id);
  }
  std::ostringstream info;
  info << "pairs " << r.user_name_pairs << ", rows " << r.retained_rows << ", users " << r.users
       << ", names " << r.names << ", mean " << stats.mean_names_per_user << ";";
  for (const auto& row : report.rows) info << ' ' << row.id << '=' << format_score(row.map);
  o.detail = (o.pass ? "" : o.detail + " | ") + info.str();
  return o;
}

}  // namespace

int main() {
  const fs::path scratch = fs::temp_directory_path() / ("namecf-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  report(1, "co-occurrence bags of the worked examples", criterion1);
  report(2, "oracle equivalence on 100 random corpora", criterion2);
  report(3, "reciprocal-rank fusion properties", criterion3);
  report(4, "MAP protocol values", criterion4);
  report(5, "PageRank normalization and fixed point", criterion5);
  report(6, "byte-identical reruns across thread counts", [&] { return criterion6(scratch); });
  report(7, "synthetic ensemble lift over most-popular", [&] { return criterion7(scratch); });

  const char* log = std::getenv("NAMECF_REAL_LOG");
  const char* known = std::getenv("NAMECF_REAL_KNOWN");
  if (log != nullptr && known != nullptr) {
    report(8, "real-dataset statistics and model ordering", [&] { return criterion8(scratch, log, known); });
  } else {
    std::printf("SKIP criterion 8: real-dataset replication (set NAMECF_REAL_LOG and NAMECF_REAL_KNOWN)\n");
  }

  fs::remove_all(scratch);
  std::printf("%s: %d failing criteria\n", failures == 0 ? "OK" : "FAILED", failures);
  return failures == 0 ? 0 : 1;
}
