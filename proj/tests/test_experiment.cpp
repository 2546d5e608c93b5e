#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "namecf/error.hpp"
#include "namecf/eval.hpp"
#include "namecf/experiment.hpp"
#include "namecf/synth.hpp"

using namespace namecf;
using namespace namecf::testing;

namespace {

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

ExperimentConfig small_experiment(const TempDir& dir, std::size_t users) {
  SynthParams params;
  params.users = users;
  params.names = 60;
  write_synthetic(params, dir / "log.tsv", dir / "known.txt");
  ExperimentConfig config;
  config.log = dir / "log.tsv";
  config.known = dir / "known.txt";
  config.out_dir = dir / "out";
  config.n = 50;
  config.k = 50;
  config.models = default_models(config.n, config.seed);
  config.use_cache = false;
  return config;
}

}  // namespace

TEST_CASE("default models") {
  auto models = default_models();
  REQUIRE(models.size() == 9);
  CHECK(models[0].n2n.bias == SeedBias::Frequency);
  CHECK(models[1].bag.filter == ActivityFilter::parse("ES"));
  CHECK(models[2].n2n.bias == SeedBias::Recency);
  CHECK(models[4].bag.exclude_top_k == 5);
  CHECK(models[5].bag.exclude_top_k == 10);
  CHECK(models[6].ub.similarity == Similarity::Tanimoto);
  CHECK(models[7].ub.similarity == Similarity::LogLikelihood);
  CHECK(models[6].ub.k == 100);
  CHECK(models[8].kind == ModelKind::PageRank);
  CHECK(default_model("baseline").kind == ModelKind::MostPopular);
  CHECK_THROWS_AS(default_model("m9"), UsageError);
  CHECK(models[0].n2n.seed != models[2].n2n.seed);
  CHECK(model_seed(42, "m0") == model_seed(42, "m0"));
  CHECK(model_seed(42, "m0") != model_seed(43, "m0"));
}

TEST_CASE("config load resolves paths and round-trips") {
  TempDir dir;
  write_text(dir / "exp.json", R"({
    "log": "data/log.tsv",
    "known": "/abs/known.txt",
    "seed": 7,
    "n": 20,
    "split": {"mode": "relaxed"},
    "models": [
      {"id": "m0"},
      {"id": "custom", "kind": "n2n", "bias": "recency", "activities": "ES", "exclude_top": 3},
      {"id": "m7", "k": 12}
    ]
  })");
  auto c = ExperimentConfig::load(dir / "exp.json");
  CHECK(c.log == dir / "data/log.tsv");
  CHECK(c.known == "/abs/known.txt");
  CHECK(c.seed == 7);
  CHECK(c.split_mode == SplitMode::Relaxed);
  REQUIRE(c.models.size() == 3);
  CHECK(c.models[0].n2n.n == 20);
  CHECK(c.models[0].n2n.seed == model_seed(7, "m0"));
  CHECK(c.models[1].n2n.bias == SeedBias::Recency);
  CHECK(c.models[1].bag.exclude_top_k == 3);
  CHECK(c.models[2].ub.k == 12);

  write_text(dir / "again.json", c.to_json());
  auto d = ExperimentConfig::load(dir / "again.json");
  CHECK(d.to_json() == c.to_json());

  write_text(dir / "bad.json", R"({"models": [{"id": "mystery"}]})");
  CHECK_THROWS_AS(ExperimentConfig::load(dir / "bad.json"), DataError);
  write_text(dir / "broken.json", "{");
  CHECK_THROWS_AS(ExperimentConfig::load(dir / "broken.json"), DataError);
}

TEST_CASE("unknown leaf aborts the experiment") {
  TempDir dir;
  auto config = small_experiment(dir, 30);
  write_text(dir / "tree.ensemble", "a = leaf(m0)\nb = leaf(m42)\nc = combine(a:1, b:1)\nroot: c\n");
  config.tree = dir / "tree.ensemble";
  try {
    run_experiment(config);
    FAIL("expected a stage failure");
  } catch (const StageError& e) {
    CHECK(std::string(e.what()).find("unknown leaf: m42") != std::string::npos);
  }
}

TEST_CASE("synthetic 50-user experiment end to end") {
  TempDir dir;
  auto config = small_experiment(dir, 50);
  auto report = run_experiment(config, 2);

  REQUIRE(report.rows.size() == 11);
  CHECK(report.rows[9].id == "ensemble");
  CHECK(report.rows[10].id == "baseline");
  CHECK(report.target_users == 50);
  for (const auto& row : report.rows) {
    CHECK(row.map > 0.0);
    CHECK(row.map <= 1.0);
  }

  const auto out = config.out_dir;
  for (const char* f : {"config.json", "train.txt", "split.tsv", "report.tsv",
                        "runs/ensemble.run", "runs/m8.run", "bags/m0.bag", "eval/ensemble.tsv"}) {
    CAPTURE(f);
    CHECK(std::filesystem::exists(out / f));
  }

  auto targets = read_targets(out / "split.tsv");
  auto run = read_run(out / "runs/ensemble.run");
  CHECK(map_at_k(run, targets, config.k).map_at_k == report.map_of("ensemble"));
  for (const auto& [user, list] : run.per_user) {
    CHECK(list.size() <= config.n);
    CHECK(is_well_formed(list));
  }

  std::ifstream in(out / "report.tsv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "model\tdescription\tMAP@50");
}

TEST_CASE("cached artifacts are reused and give identical output") {
  TempDir dir;
  auto config = small_experiment(dir, 40);
  config.use_cache = true;
  auto first = run_experiment(config);
  auto report = [&] {
    std::ifstream in(config.out_dir / "report.tsv");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const auto a = report();
  CHECK(std::filesystem::exists(config.out_dir / "cache"));
  auto second = run_experiment(config);
  CHECK(report() == a);
  CHECK(first.map_of("ensemble") == second.map_of("ensemble"));
}
