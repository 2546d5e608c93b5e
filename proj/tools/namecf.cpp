// namecf: command-line driver for the name recommendation pipeline.

#include <cstdio>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "namecf/cooccur.hpp"
#include "namecf/ensemble.hpp"
#include "namecf/error.hpp"
#include "namecf/eval.hpp"
#include "namecf/experiment.hpp"
#include "namecf/ingest.hpp"
#include "namecf/parallel.hpp"
#include "namecf/runs.hpp"
#include "namecf/synth.hpp"

namespace fs = std::filesystem;
using namespace namecf;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kStage = 3 };

std::vector<std::string> user_list(const std::string& spec, const Corpus* corpus) {
  if (spec == "all") {
    if (corpus == nullptr) throw UsageError("--users all needs --corpus");
    return {corpus->users().begin(), corpus->users().end()};
  }
  auto ids = read_id_list(spec);
  return {ids.begin(), ids.end()};
}

void print_report(const ExperimentReport& report) {
  std::printf("%-10s %-20s %s\n", "model", "description", ("MAP@" + std::to_string(report.k)).c_str());
  for (const auto& row : report.rows) {
    std::printf("%-10s %-20s %.6f\n", row.id.c_str(), row.description.c_str(), row.map);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"namecf - collaborative-filtering ensemble for given-name recommendation"};
  app.require_subcommand(1);
  std::optional<std::size_t> threads_flag;
  app.add_option("--threads", threads_flag, "Worker threads (default: NAMECF_THREADS or all cores)");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Parse and filter an activity log into a corpus file");
  std::string log_path, known_path, columns = "user,activity,name,timestamp", corpus_out, rejects_out;
  ingest->add_option("--log", log_path, "Activity log")->required();
  ingest->add_option("--known", known_path, "Known names, one per line")->required();
  ingest->add_option("--columns", columns, "Column order of the log");
  ingest->add_option("--out", corpus_out, "Corpus file to write")->required();
  ingest->add_option("--rejects", rejects_out, "Write rejected rows (line<TAB>reason)");

  // stats
  auto* stats = app.add_subcommand("stats", "Names-per-user statistics and histograms");
  std::string stats_corpus, stats_dir;
  stats->add_option("--corpus", stats_corpus)->required();
  stats->add_option("--out-dir", stats_dir, "Write names_per_user.tsv and users_per_name.tsv");

  // split
  auto* split = app.add_subcommand("split", "Leave-last-two validation split");
  std::string split_corpus, split_mode = "strict", split_users, split_train, split_out;
  split->add_option("--corpus", split_corpus)->required();
  split->add_option("--mode", split_mode)->check(CLI::IsMember({"strict", "relaxed"}));
  split->add_option("--users", split_users, "User list for relaxed mode");
  split->add_option("--out-train", split_train)->required();
  split->add_option("--out-split", split_out)->required();

  // bag
  auto* bag = app.add_subcommand("bag", "Build a co-occurrence bag");
  std::string bag_corpus, bag_activities = "ES,LS,ND", bag_out, bag_popularity = "users";
  std::size_t bag_exclude = 0;
  bag->add_option("--corpus", bag_corpus)->required();
  bag->add_option("--activities", bag_activities, "ES,LS,ND,AF,LCS or ALL");
  bag->add_option("--exclude-top", bag_exclude, "Drop the k most popular names");
  bag->add_option("--popularity", bag_popularity)->check(CLI::IsMember({"users", "interactions"}));
  bag->add_option("--out", bag_out)->required();

  // recommend
  auto* rec = app.add_subcommand("recommend", "Run one model");
  std::string rec_model, rec_corpus, rec_bag, rec_users = "all", rec_out;
  std::size_t rec_n = 1000, rec_k = 100;
  std::uint64_t rec_seed = 42;
  std::optional<std::size_t> rec_iterations;
  std::optional<double> rec_decay, rec_damping;
  rec->add_option("--model", rec_model, "m0..m8 or baseline")->required();
  rec->add_option("--corpus", rec_corpus);
  rec->add_option("--bag", rec_bag);
  rec->add_option("--users", rec_users, "User list file or 'all'");
  rec->add_option("--n", rec_n);
  rec->add_option("--k", rec_k, "Neighborhood size (m6, m7)");
  rec->add_option("--seed", rec_seed);
  rec->add_option("--max-iterations", rec_iterations);
  rec->add_option("--decay", rec_decay, "Recency decay (m2..m5)");
  rec->add_option("--damping", rec_damping, "PageRank damping (m8)");
  rec->add_option("--out", rec_out, "Runs directory")->required();

  // ensemble
  auto* ens = app.add_subcommand("ensemble", "Combine runs with an ensemble tree");
  std::string ens_tree, ens_runs, ens_out, ens_users, ens_name = "ensemble";
  std::size_t ens_n = 1000;
  bool ens_print = false;
  ens->add_option("--tree", ens_tree, "Tree config (default: built-in)");
  ens->add_option("--runs", ens_runs, "Directory of *.run files");
  ens->add_option("--out", ens_out, "Output runs directory");
  ens->add_option("--users", ens_users, "User list (default: users of the leaf runs)");
  ens->add_option("--name", ens_name, "Output run name");
  ens->add_option("--n", ens_n);
  ens->add_flag("--print-default", ens_print, "Print the built-in tree and exit");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "MAP@k of runs against a split");
  std::string eval_runs, eval_split, eval_report;
  std::size_t eval_k = 1000;
  evaluate->add_option("--runs", eval_runs, "Run file or directory")->required();
  evaluate->add_option("--split", eval_split)->required();
  evaluate->add_option("--k", eval_k);
  evaluate->add_option("--report", eval_report, "Report TSV (per run for a directory)");

  // run
  auto* run = app.add_subcommand("run", "Full experiment");
  std::string run_config, run_log, run_known, run_corpus, run_out, run_tree;
  std::optional<std::uint64_t> run_seed;
  bool run_no_cache = false;
  run->add_option("--config", run_config, "Experiment JSON");
  run->add_option("--log", run_log);
  run->add_option("--known", run_known);
  run->add_option("--corpus", run_corpus);
  run->add_option("--tree", run_tree);
  run->add_option("--out", run_out);
  run->add_option("--seed", run_seed);
  run->add_flag("--no-cache", run_no_cache);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a planted-cluster log");
  SynthParams sp;
  std::string synth_log, synth_known;
  synth->add_option("--clusters", sp.clusters);
  synth->add_option("--users", sp.users);
  synth->add_option("--names", sp.names);
  synth->add_option("--noise", sp.noise);
  synth->add_option("--zipf", sp.zipf_exponent, "Within-cluster popularity skew");
  synth->add_option("--seed", sp.seed);
  synth->add_option("--out-log", synth_log)->required();
  synth->add_option("--out-known", synth_known)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const std::size_t threads = resolve_threads(threads_flag);

    if (*ingest) {
      auto parsed = parse_activity_log(log_path, ColumnMap::parse(columns));
      auto result = preprocess(parsed.interactions, KnownNames::load(known_path));
      write_corpus(result.corpus, corpus_out);
      if (!rejects_out.empty()) {
        std::ofstream out(rejects_out);
        for (const auto& r : parsed.rejects) out << r.line << '\t' << r.reason << '\n';
      }
      const auto& r = result.report;
      std::cout << "rows read           " << r.input_rows << "\n"
                << "rows rejected       " << parsed.rejects.size() << "\n"
                << "category dropped    " << r.dropped_category << "\n"
                << "unknown dropped     " << r.dropped_unknown << "\n"
                << "rows retained       " << r.retained_rows << "\n"
                << "user-name pairs     " << r.user_name_pairs << "\n"
                << "users               " << r.users << "\n"
                << "names               " << r.names << "\n";
    } else if (*stats) {
      auto s = compute_stats(read_corpus(stats_corpus));
      std::cout << "users   " << s.users << "\nnames   " << s.names << "\nmean    "
                << s.mean_names_per_user << "\nmedian  " << s.median_names_per_user
                << "\nmin     " << s.min_names_per_user << "\nmax     "
                << s.max_names_per_user << "\n";
      if (!stats_dir.empty()) {
        fs::create_directories(stats_dir);
        write_histogram(s.names_per_user, fs::path(stats_dir) / "names_per_user.tsv");
        write_histogram(s.users_per_name, fs::path(stats_dir) / "users_per_name.tsv");
      }
    } else if (*split) {
      std::set<std::string> relaxed;
      const auto mode = split_mode == "strict" ? SplitMode::Strict : SplitMode::Relaxed;
      if (mode == SplitMode::Relaxed) {
        if (split_users.empty()) throw UsageError("relaxed mode needs --users");
        relaxed = read_id_list(split_users);
      }
      auto s = split_validation(read_corpus(split_corpus), mode, relaxed);
      write_corpus(s.train, split_train);
      write_targets(s.targets, split_out);
      std::cout << "target users " << s.targets.size() << ", skipped " << s.skipped.size() << "\n";
    } else if (*bag) {
      BagSpec spec;
      spec.filter = ActivityFilter::parse(bag_activities);
      spec.exclude_top_k = bag_exclude;
      spec.measure = bag_popularity == "users" ? PopularityMeasure::DistinctUsers
                                               : PopularityMeasure::Interactions;
      auto b = build_bag(read_corpus(bag_corpus), spec, threads);
      write_bag(b, bag_out);
      std::cout << "pairs " << b.pair_count() << "\n";
    } else if (*rec) {
      auto spec = default_model(rec_model, rec_n, rec_seed);
      spec.ub.k = rec_k;
      if (rec_iterations) spec.n2n.max_iterations = *rec_iterations;
      if (rec_decay) spec.n2n.recency_decay = *rec_decay;
      if (rec_damping) spec.pr.damping = *rec_damping;

      std::optional<Corpus> corpus;
      if (!rec_corpus.empty()) corpus = read_corpus(rec_corpus);
      std::optional<CooccurrenceBag> b;
      Run result;
      if (spec.kind == ModelKind::PageRank && !corpus) {
        if (rec_bag.empty()) throw UsageError("m8 needs --bag or --corpus");
        b = read_bag(rec_bag);
        result = run_model(spec, Corpus{}, {}, threads, &*b);
      } else {
        if (!corpus) throw UsageError("model " + rec_model + " needs --corpus");
        if (!rec_bag.empty() &&
            (spec.kind == ModelKind::NameToName || spec.kind == ModelKind::PageRank)) {
          b = read_bag(rec_bag, *corpus);
        }
        result = run_model(spec, *corpus, user_list(rec_users, &*corpus), threads,
                           b ? &*b : nullptr);
      }
      fs::create_directories(rec_out);
      write_run(result, fs::path(rec_out) / (rec_model + ".run"));
    } else if (*ens) {
      if (ens_print) {
        std::cout << default_tree_text();
        return kOk;
      }
      if (ens_runs.empty() || ens_out.empty()) throw UsageError("ensemble needs --runs and --out");
      auto tree = ens_tree.empty() ? EnsembleTree::parse(default_tree_text())
                                   : EnsembleTree::load(ens_tree);
      auto store = RunStore::load_dir(ens_runs);
      std::vector<std::string> users;
      if (!ens_users.empty()) {
        users = user_list(ens_users, nullptr);
      } else {
        std::set<std::string> all;
        for (const auto& model : tree.leaf_models()) {
          if (const auto* r = store.find(model)) {
            for (const auto& [user, list] : r->per_user) all.insert(user);
          }
        }
        users.assign(all.begin(), all.end());
      }
      auto out = evaluate_tree(tree, store, users, ens_n, ens_name, threads);
      fs::create_directories(ens_out);
      write_run(out, fs::path(ens_out) / (ens_name + ".run"));
      write_submission(out, fs::path(ens_out) / (ens_name + ".submission.tsv"), ens_n);
    } else if (*evaluate) {
      const auto targets = read_targets(eval_split);
      std::vector<fs::path> files;
      if (fs::is_directory(eval_runs)) {
        for (const auto& e : fs::directory_iterator(eval_runs)) {
          if (e.path().extension() == ".run") files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());
      } else {
        files.push_back(eval_runs);
      }
      for (const auto& file : files) {
        auto r = read_run(file);
        auto result = map_at_k(r, targets, eval_k);
        std::cout << r.model << '\t' << format_score(result.map_at_k) << '\n';
        if (!eval_report.empty()) {
          fs::path report = eval_report;
          if (files.size() > 1) {
            report = report.parent_path() /
                     (report.stem().string() + "." + r.model + report.extension().string());
          }
          write_eval_report(result, report);
        }
      }
    } else if (*run) {
      ExperimentConfig config;
      if (!run_config.empty()) config = ExperimentConfig::load(run_config);
      if (run_seed) {
        config.seed = *run_seed;
        for (auto& m : config.models) m.n2n.seed = model_seed(config.seed, m.id);
      }
      if (!run_log.empty()) config.log = run_log;
      if (!run_known.empty()) config.known = run_known;
      if (!run_corpus.empty()) config.corpus = run_corpus;
      if (!run_tree.empty()) config.tree = run_tree;
      if (!run_out.empty()) config.out_dir = run_out;
      if (run_no_cache) config.use_cache = false;
      print_report(run_experiment(config, threads));
    } else if (*synth) {
      write_synthetic(sp, synth_log, synth_known);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const StageError& e) {
    std::cerr << "stage failure: " << e.what() << "\n";
    return kStage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kStage;
  }
  return kOk;
}
