#include "evir/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "evir/errors.hpp"

namespace evir {

namespace {

void require_relevant(const std::set<std::string>& relevant) {
    if (relevant.empty()) throw DataError(DataErrorKind::EmptyRelevantSet, "metric needs a non-empty relevant set");
}

}  // namespace

double average_precision(const RankedList& ranking, const std::set<std::string>& relevant) {
    require_relevant(relevant);
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        if (relevant.contains(ranking[i].id)) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(relevant.size());
}

double reciprocal_rank(const RankedList& ranking, const std::set<std::string>& relevant) {
    require_relevant(relevant);
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        if (relevant.contains(ranking[i].id)) return 1.0 / static_cast<double>(i + 1);
    }
    return 0.0;
}

double recall_at(const RankedList& ranking, const std::set<std::string>& relevant, std::size_t k) {
    require_relevant(relevant);
    if (k == 0) throw InternalError("recall_at: k must be >= 1");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ranking.size() && i < k; ++i) {
        if (relevant.contains(ranking[i].id)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(relevant.size());
}

MetricReport evaluate_run(const RunResult& run, const std::map<std::string, std::set<std::string>>& truth,
                          const std::vector<std::size_t>& ks) {
    MetricReport report;
    static const RankedList kEmpty;
    for (const auto& [query_id, relevant] : truth) {
        auto it = run.find(query_id);
        const RankedList& ranking = it == run.end() ? kEmpty : it->second;
        if (it == run.end()) ++report.missing_from_run;

        QueryMetrics qm;
        qm.ap = average_precision(ranking, relevant);
        qm.rr = reciprocal_rank(ranking, relevant);
        for (std::size_t k : ks) qm.recall[k] = recall_at(ranking, relevant, k);

        report.map_score += qm.ap;
        report.mrr_score += qm.rr;
        for (std::size_t k : ks) report.recall_at[k] += qm.recall[k];
        report.per_query.emplace(query_id, std::move(qm));
    }
    report.evaluated = truth.size();
    for (const auto& [query_id, ranking] : run) {
        if (!truth.contains(query_id)) ++report.ignored_from_run;
    }
    if (report.evaluated > 0) {
        auto n = static_cast<double>(report.evaluated);
        report.map_score /= n;
        report.mrr_score /= n;
        for (auto& [k, value] : report.recall_at) value /= n;
    }
    return report;
}

RunResult load_run(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(DataErrorKind::MissingFile, "cannot open " + path);
    RunResult run;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto where = [&] { return path + ":" + std::to_string(line_no); };
        nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
        if (record.is_discarded() || !record.is_object()) {
            throw DataError(DataErrorKind::MalformedRecord, where() + ": not a JSON object");
        }
        if (!record.contains("query_id") || !record["query_id"].is_string()) {
            throw DataError(DataErrorKind::MalformedRecord, where() + ": missing string `query_id`");
        }
        std::string query_id = record["query_id"].get<std::string>();
        if (!record.contains("image_ids") || !record["image_ids"].is_array()) {
            throw DataError(DataErrorKind::MalformedRecord, where() + ": missing array `image_ids`");
        }
        std::vector<double> scores;
        if (record.contains("scores")) {
            if (!record["scores"].is_array() || record["scores"].size() != record["image_ids"].size()) {
                throw DataError(DataErrorKind::MalformedRecord, where() + ": `scores` does not match `image_ids`");
            }
            for (const auto& value : record["scores"]) {
                if (!value.is_number()) {
                    throw DataError(DataErrorKind::MalformedRecord, where() + ": non-numeric score");
                }
                scores.push_back(value.get<double>());
            }
        }
        RankedList ranking;
        std::set<std::string> seen;
        for (std::size_t i = 0; i < record["image_ids"].size(); ++i) {
            const auto& value = record["image_ids"][i];
            if (!value.is_string()) throw DataError(DataErrorKind::MalformedRecord, where() + ": non-string image id");
            std::string id = value.get<std::string>();
            if (!seen.insert(id).second) {
                throw DataError(DataErrorKind::DuplicateId, where() + ": image `" + id + "` listed twice");
            }
            ranking.push_back(ScoredId{std::move(id), scores.empty() ? 0.0 : scores[i]});
        }
        if (!run.emplace(std::move(query_id), std::move(ranking)).second) {
            throw DataError(DataErrorKind::DuplicateId, where() + ": repeated query in run file");
        }
    }
    return run;
}

void save_run(const std::string& path, const std::vector<RunEntry>& entries) {
    std::ofstream out(path);
    if (!out) throw DataError(DataErrorKind::MissingFile, "cannot write " + path);
    for (const auto& [query_id, ranking] : entries) {
        nlohmann::json record;
        record["query_id"] = query_id;
        auto& ids = record["image_ids"] = nlohmann::json::array();
        auto& scores = record["scores"] = nlohmann::json::array();
        for (const ScoredId& entry : ranking) {
            ids.push_back(entry.id);
            scores.push_back(entry.score);
        }
        out << record.dump() << '\n';
    }
    if (!out) throw DataError(DataErrorKind::MissingFile, "write failed for " + path);
}

std::string format_report(const MetricReport& report) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(4);
    out << "queries evaluated: " << report.evaluated;
    if (report.missing_from_run > 0) out << "  (missing from run: " << report.missing_from_run << ")";
    if (report.ignored_from_run > 0) out << "  (ignored, no ground truth: " << report.ignored_from_run << ")";
    out << "\n";
    out << "mAP " << report.map_score << "\n";
    out << "mRR " << report.mrr_score << "\n";
    for (const auto& [k, value] : report.recall_at) out << "R@" << k << "  " << value << "\n";
    return out.str();
}

void save_report_json(const std::string& path, const MetricReport& report) {
    nlohmann::json doc;
    doc["map"] = report.map_score;
    doc["mrr"] = report.mrr_score;
    auto& recall = doc["recall"] = nlohmann::json::object();
    for (const auto& [k, value] : report.recall_at) recall[std::to_string(k)] = value;
    doc["evaluated"] = report.evaluated;
    doc["missing_from_run"] = report.missing_from_run;
    doc["ignored_from_run"] = report.ignored_from_run;
    auto& per_query = doc["per_query"] = nlohmann::json::object();
    for (const auto& [query_id, qm] : report.per_query) {
        nlohmann::json entry;
        entry["ap"] = qm.ap;
        entry["rr"] = qm.rr;
        auto& qr = entry["recall"] = nlohmann::json::object();
        for (const auto& [k, value] : qm.recall) qr[std::to_string(k)] = value;
        per_query[query_id] = std::move(entry);
    }
    std::ofstream out(path);
    if (!out) throw DataError(DataErrorKind::MissingFile, "cannot write " + path);
    out << doc.dump(2) << '\n';
    if (!out) throw DataError(DataErrorKind::MissingFile, "write failed for " + path);
}

}  // namespace evir
