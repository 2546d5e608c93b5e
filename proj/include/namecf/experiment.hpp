#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "namecf/cooccur.hpp"
#include "namecf/ingest.hpp"
#include "namecf/n2n.hpp"
#include "namecf/neighborhood.hpp"
#include "namecf/pagerank.hpp"
#include "namecf/runs.hpp"

namespace namecf {

enum class ModelKind { NameToName, UserBased, PageRank, MostPopular };

struct ModelSpec {
  std::string id;
  std::string description;
  ModelKind kind = ModelKind::NameToName;
  std::size_t n = 1000;  // list length
  BagSpec bag;        // NameToName, PageRank
  N2NConfig n2n;      // NameToName
  UBConfig ub;        // UserBased
  PRConfig pr;        // PageRank
};

/// Per-model RNG seed fanned out from the experiment seed.
std::uint64_t model_seed(std::uint64_t global_seed, const std::string& id);

/// "m0".."m8" or "baseline". Throws UsageError for other ids.
ModelSpec default_model(const std::string& id, std::size_t n = 1000,
                        std::uint64_t global_seed = 42);

/// m0..m8 with their default parameters.
std::vector<ModelSpec> default_models(std::size_t n = 1000,
                                      std::uint64_t global_seed = 42);

struct ExperimentConfig {
  /// Either a raw log plus known names, or an already-ingested corpus.
  std::filesystem::path log;
  std::filesystem::path known;
  std::filesystem::path corpus;
  std::string columns = "user,activity,name,timestamp";

  SplitMode split_mode = SplitMode::Strict;
  std::filesystem::path relaxed_users;

  std::vector<ModelSpec> models = default_models();
  /// Empty: the built-in default tree.
  std::filesystem::path tree;
  std::uint64_t seed = 42;
  std::size_t n = 1000;
  std::size_t k = 1000;
  std::filesystem::path out_dir = "namecf-out";
  bool use_cache = true;

  /// JSON file; missing keys keep their defaults. Relative paths resolve
  /// against the file's directory, the default output directory included.
  static ExperimentConfig load(const std::filesystem::path& path);
  std::string to_json() const;
};

struct ReportRow {
  std::string id;
  std::string description;
  double map = 0.0;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;  // models, then ensemble, then baseline
  PreprocessReport preprocess;
  std::size_t target_users = 0;
  std::size_t k = 1000;

  double map_of(const std::string& id) const;
};

/// ingest -> split -> bags -> model runs -> ensemble -> evaluate.
/// Writes under out_dir: config.json, corpus.txt, train.txt, split.tsv,
/// bags/, runs/, eval/, report.tsv. Errors surface as StageError.
ExperimentReport run_experiment(const ExperimentConfig& config,
                                std::size_t threads = 1);

void write_report(const ExperimentReport& report,
                  const std::filesystem::path& path);

/// Runs one model over the given users of a training corpus.
Run run_model(const ModelSpec& spec, const Corpus& train,
              const std::vector<std::string>& users, std::size_t threads,
              const CooccurrenceBag* bag = nullptr);

}  // namespace namecf
