#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "evir/ranked_list.hpp"

namespace evir {

// System output per query, keyed for evaluation lookups.
using RunResult = std::map<std::string, RankedList>;

// One run-file record; a run file keeps the query order it was written in.
using RunEntry = std::pair<std::string, RankedList>;

struct QueryMetrics {
    double ap = 0.0;
    double rr = 0.0;
    std::map<std::size_t, double> recall;  // K -> recall@K

    bool operator==(const QueryMetrics&) const = default;
};

struct MetricReport {
    double map_score = 0.0;
    double mrr_score = 0.0;
    std::map<std::size_t, double> recall_at;  // K -> mean recall@K
    std::map<std::string, QueryMetrics> per_query;
    std::size_t evaluated = 0;          // queries contributing to the means
    std::size_t missing_from_run = 0;   // truth queries absent from the run (scored 0)
    std::size_t ignored_from_run = 0;   // run queries absent from the truth
};

// Classical AP: (1/|relevant|) * sum of precision@i at each relevant hit.
// Relevant items absent from the ranking contribute zero. `relevant` must be
// non-empty.
double average_precision(const RankedList& ranking, const std::set<std::string>& relevant);

// 1/rank of the first relevant item, 0 when none is retrieved.
double reciprocal_rank(const RankedList& ranking, const std::set<std::string>& relevant);

// |relevant intersect top-k| / |relevant|; k >= 1.
double recall_at(const RankedList& ranking, const std::set<std::string>& relevant, std::size_t k);

// Scores every truth query (missing run entries count as empty rankings) and
// averages without weighting. Run entries without a truth entry are ignored
// but counted.
MetricReport evaluate_run(const RunResult& run, const std::map<std::string, std::set<std::string>>& truth,
                          const std::vector<std::size_t>& ks);

// Run files are JSON lines: {"query_id": ..., "image_ids": [...], "scores": [...]}.
RunResult load_run(const std::string& path);
void save_run(const std::string& path, const std::vector<RunEntry>& entries);

// Human-readable summary table.
std::string format_report(const MetricReport& report);
// Full report, per-query values included, as a single JSON document.
void save_report_json(const std::string& path, const MetricReport& report);

}  // namespace evir
