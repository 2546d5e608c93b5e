#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>

#include "namecf/ingest.hpp"
#include "namecf/ranked_list.hpp"
#include "namecf/runs.hpp"

namespace namecf {

/// Average precision of two held-out names within the first k entries.
/// Missing targets take virtual positions k+1 then k+2.
/// Throws DataError when the list contains a duplicate name.
double average_precision_user(const RankedList& list, const TargetPair& targets,
                              std::size_t k = 1000);

struct EvalResult {
  double map_at_k = 0.0;
  std::map<std::string, double> per_user;
  std::size_t k = 1000;
  std::size_t missing_users = 0;  // target users without any list
};

/// Users without a list in `run` are scored as empty lists.
EvalResult map_at_k(const Run& run, const Targets& targets,
                    std::size_t k = 1000);

/// `user<TAB>ap` lines then `MAP<TAB>value`.
void write_eval_report(const EvalResult& result,
                       const std::filesystem::path& path);

}  // namespace namecf
