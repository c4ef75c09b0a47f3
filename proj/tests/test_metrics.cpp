#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "evir/errors.hpp"
#include "evir/metrics.hpp"
#include "support/oracles.hpp"
#include "support/tempdir.hpp"

using evir::DataError;
using evir::DataErrorKind;
using evir::RankedList;
using evir::RunResult;
using evir::ScoredId;

namespace {

RankedList ranking_of(const std::vector<std::string>& ids) {
    RankedList list;
    double score = static_cast<double>(ids.size());
    for (const std::string& id : ids) list.push_back(ScoredId{id, score--});
    return list;
}

std::vector<std::string> ids_of(const RankedList& list) {
    std::vector<std::string> ids;
    for (const ScoredId& entry : list) ids.push_back(entry.id);
    return ids;
}

}  // namespace

TEST_CASE("average_precision: pinned single- and double-relevant cases") {
    CHECK(evir::average_precision(ranking_of({"a", "x", "y"}), {"a"}) == 1.0);
    CHECK(evir::average_precision(ranking_of({"x", "a", "y"}), {"a"}) == 0.5);
    double ap = evir::average_precision(ranking_of({"a", "x", "b"}), {"a", "b"});
    CHECK(std::abs(ap - 5.0 / 6.0) <= 1e-12);
    // relevant items never retrieved contribute zero
    CHECK(evir::average_precision(ranking_of({"x", "y"}), {"a"}) == 0.0);
    CHECK(evir::average_precision(RankedList{}, {"a"}) == 0.0);
}

TEST_CASE("average_precision: empty relevant set is a data error") {
    CHECK_THROWS_AS(evir::average_precision(ranking_of({"a"}), {}), DataError);
    try {
        evir::average_precision(ranking_of({"a"}), {});
    } catch (const DataError& e) {
        CHECK(e.kind() == DataErrorKind::EmptyRelevantSet);
    }
}

TEST_CASE("reciprocal_rank: pinned cases") {
    CHECK(evir::reciprocal_rank(ranking_of({"a", "x"}), {"a"}) == 1.0);
    CHECK(evir::reciprocal_rank(ranking_of({"x", "y", "z", "a"}), {"a"}) == 0.25);
    CHECK(evir::reciprocal_rank(ranking_of({"x", "y"}), {"a"}) == 0.0);
    CHECK_THROWS_AS(evir::reciprocal_rank(ranking_of({"a"}), {}), DataError);
}

TEST_CASE("recall_at: pinned cases and guards") {
    CHECK(evir::recall_at(ranking_of({"x", "y", "a", "z", "w"}), {"a"}, 5) == 1.0);
    CHECK(evir::recall_at(ranking_of({"a", "x", "y"}), {"a", "b"}, 10) == 0.5);
    CHECK(evir::recall_at(RankedList{}, {"a"}, 10) == 0.0);
    CHECK_THROWS_AS(evir::recall_at(ranking_of({"a"}), {}, 5), DataError);
    CHECK_THROWS_AS(evir::recall_at(ranking_of({"a"}), {"a"}, 0), evir::InternalError);
}

TEST_CASE("recall_at: non-decreasing in k") {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 100; ++round) {
        std::vector<std::string> pool;
        for (int i = 0; i < 12; ++i) pool.push_back("i" + std::to_string(i));
        std::shuffle(pool.begin(), pool.end(), rng);
        std::set<std::string> relevant{pool[0], pool[3], pool[7]};
        std::shuffle(pool.begin(), pool.end(), rng);
        RankedList ranking = ranking_of(pool);
        double previous = 0.0;
        for (std::size_t k = 1; k <= pool.size(); ++k) {
            double r = evir::recall_at(ranking, relevant, k);
            CHECK(r >= previous);
            previous = r;
        }
        CHECK(previous == 1.0);
    }
}

TEST_CASE("AP equals RR on single-relevant rankings") {
    std::mt19937_64 rng(17);
    int cases = 0;
    for (int round = 0; round < 1000; ++round) {
        std::vector<std::string> pool;
        for (int i = 0; i < 20; ++i) pool.push_back("img" + std::to_string(i));
        std::shuffle(pool.begin(), pool.end(), rng);
        pool.resize(1 + rng() % pool.size());
        std::set<std::string> relevant{"img" + std::to_string(rng() % 25)};  // may be absent
        RankedList ranking = ranking_of(pool);
        double ap = evir::average_precision(ranking, relevant);
        double rr = evir::reciprocal_rank(ranking, relevant);
        REQUIRE(std::abs(ap - rr) <= 1e-12);
        // and both match the independent recomputation
        REQUIRE(std::abs(ap - oracle::ap(pool, relevant)) <= 1e-12);
        REQUIRE(std::abs(rr - oracle::rr(pool, relevant)) <= 1e-12);
        ++cases;
    }
    CHECK(cases == 1000);
}

TEST_CASE("prefixing an irrelevant item never improves any metric") {
    std::mt19937_64 rng(29);
    for (int round = 0; round < 200; ++round) {
        std::vector<std::string> pool;
        for (int i = 0; i < 10; ++i) pool.push_back("d" + std::to_string(i));
        std::shuffle(pool.begin(), pool.end(), rng);
        std::set<std::string> relevant{pool[2], pool[5]};
        std::vector<std::string> prefixed = pool;
        prefixed.insert(prefixed.begin(), "zzz-irrelevant");

        CHECK(evir::average_precision(ranking_of(prefixed), relevant) <=
              evir::average_precision(ranking_of(pool), relevant));
        CHECK(evir::reciprocal_rank(ranking_of(prefixed), relevant) <=
              evir::reciprocal_rank(ranking_of(pool), relevant));
        for (std::size_t k : {1, 5, 10}) {
            CHECK(evir::recall_at(ranking_of(prefixed), relevant, k) <=
                  evir::recall_at(ranking_of(pool), relevant, k));
        }
    }
}

TEST_CASE("metrics are invariant under a consistent id relabeling") {
    std::vector<std::string> pool = {"a", "b", "c", "d", "e"};
    std::set<std::string> relevant = {"b", "d"};
    auto relabel = [](const std::string& id) { return "node/" + id + "/42"; };
    std::vector<std::string> mapped;
    for (const std::string& id : pool) mapped.push_back(relabel(id));
    std::set<std::string> mapped_relevant;
    for (const std::string& id : relevant) mapped_relevant.insert(relabel(id));

    CHECK(evir::average_precision(ranking_of(pool), relevant) ==
          evir::average_precision(ranking_of(mapped), mapped_relevant));
    CHECK(evir::reciprocal_rank(ranking_of(pool), relevant) ==
          evir::reciprocal_rank(ranking_of(mapped), mapped_relevant));
    CHECK(evir::recall_at(ranking_of(pool), relevant, 3) ==
          evir::recall_at(ranking_of(mapped), mapped_relevant, 3));
}

TEST_CASE("evaluate_run: arithmetic means and bookkeeping counts") {
    RunResult run;
    run["q1"] = ranking_of({"a", "x"});       // AP 1.0
    run["q2"] = ranking_of({"x", "b"});       // AP 0.5
    run["q9"] = ranking_of({"whatever"});     // not in truth: ignored
    std::map<std::string, std::set<std::string>> truth;
    truth["q1"] = {"a"};
    truth["q2"] = {"b"};
    truth["q3"] = {"c"};                      // missing from run: scores 0

    evir::MetricReport report = evir::evaluate_run(run, truth, {1, 5});
    CHECK(report.evaluated == 3);
    CHECK(report.missing_from_run == 1);
    CHECK(report.ignored_from_run == 1);
    CHECK(std::abs(report.map_score - (1.0 + 0.5 + 0.0) / 3.0) <= 1e-12);
    CHECK(std::abs(report.mrr_score - (1.0 + 0.5 + 0.0) / 3.0) <= 1e-12);
    CHECK(std::abs(report.recall_at.at(1) - (1.0 + 0.0 + 0.0) / 3.0) <= 1e-12);
    CHECK(std::abs(report.recall_at.at(5) - (1.0 + 1.0 + 0.0) / 3.0) <= 1e-12);
    CHECK(report.per_query.size() == 3);
    CHECK(report.per_query.at("q3").ap == 0.0);
}

TEST_CASE("evaluate_run: two queries with AP 1.0 and 0.5 average to 0.75") {
    RunResult run;
    run["q1"] = ranking_of({"a"});
    run["q2"] = ranking_of({"x", "b"});
    std::map<std::string, std::set<std::string>> truth{{"q1", {"a"}}, {"q2", {"b"}}};
    evir::MetricReport report = evir::evaluate_run(run, truth, {1});
    CHECK(std::abs(report.map_score - 0.75) <= 1e-12);
}

TEST_CASE("evaluate_run: aggregates equal the mean of independently recomputed per-query values") {
    std::mt19937_64 rng(41);
    RunResult run;
    std::map<std::string, std::set<std::string>> truth;
    for (int q = 0; q < 100; ++q) {
        std::string qid = "q" + std::to_string(q);
        std::vector<std::string> pool;
        for (int i = 0; i < 15; ++i) pool.push_back("img" + std::to_string(i));
        std::shuffle(pool.begin(), pool.end(), rng);
        pool.resize(1 + rng() % 15);
        run[qid] = ranking_of(pool);
        truth[qid] = {"img" + std::to_string(rng() % 15), "img" + std::to_string(rng() % 15)};
    }
    std::vector<std::size_t> ks = {1, 5, 10};
    evir::MetricReport report = evir::evaluate_run(run, truth, ks);

    double ap_sum = 0.0;
    double rr_sum = 0.0;
    std::map<std::size_t, double> recall_sum;
    for (const auto& [qid, relevant] : truth) {
        std::vector<std::string> ranking = ids_of(run.at(qid));
        ap_sum += oracle::ap(ranking, relevant);
        rr_sum += oracle::rr(ranking, relevant);
        for (std::size_t k : ks) recall_sum[k] += oracle::recall(ranking, relevant, k);
    }
    double n = static_cast<double>(truth.size());
    CHECK(std::abs(report.map_score - ap_sum / n) <= 1e-12);
    CHECK(std::abs(report.mrr_score - rr_sum / n) <= 1e-12);
    for (std::size_t k : ks) CHECK(std::abs(report.recall_at.at(k) - recall_sum[k] / n) <= 1e-12);
}

TEST_CASE("run files: save preserves order, load round-trips content") {
    testsupport::TempDir dir;
    std::vector<evir::RunEntry> entries = {
        {"q2", ranking_of({"b", "a"})},
        {"q1", ranking_of({"c"})},
    };
    std::string path = dir.file("run.jsonl");
    evir::save_run(path, entries);

    // the file keeps write order: q2 line first
    std::string text = testsupport::read_file(path);
    CHECK(text.find("q2") < text.find("q1"));

    RunResult loaded = evir::load_run(path);
    REQUIRE(loaded.size() == 2);
    REQUIRE(loaded.at("q2").size() == 2);
    CHECK(loaded.at("q2")[0].id == "b");
    CHECK(loaded.at("q2")[1].id == "a");
    CHECK(loaded.at("q2")[0].score == entries[0].second[0].score);
    CHECK(loaded.at("q1")[0].id == "c");
}

TEST_CASE("run files: duplicates are rejected") {
    testsupport::TempDir dir;
    std::string path = dir.file("run.jsonl");

    SUBCASE("duplicate image within a query") {
        testsupport::write_file(
            path, R"({"query_id": "q1", "image_ids": ["a", "a"], "scores": [2.0, 1.0]})" "\n");
        try {
            evir::load_run(path);
            FAIL("expected DataError");
        } catch (const DataError& e) {
            CHECK(e.kind() == DataErrorKind::DuplicateId);
        }
    }
    SUBCASE("repeated query line") {
        testsupport::write_file(path,
                                R"({"query_id": "q1", "image_ids": ["a"], "scores": [1.0]})" "\n"
                                R"({"query_id": "q1", "image_ids": ["b"], "scores": [1.0]})" "\n");
        try {
            evir::load_run(path);
            FAIL("expected DataError");
        } catch (const DataError& e) {
            CHECK(e.kind() == DataErrorKind::DuplicateId);
        }
    }
    SUBCASE("scores array shorter than image_ids") {
        testsupport::write_file(path, R"({"query_id": "q1", "image_ids": ["a", "b"], "scores": [1.0]})" "\n");
        try {
            evir::load_run(path);
            FAIL("expected DataError");
        } catch (const DataError& e) {
            CHECK(e.kind() == DataErrorKind::MalformedRecord);
        }
    }
}

TEST_CASE("format_report: four-decimal summary lines") {
    RunResult run;
    run["q1"] = ranking_of({"a"});
    std::map<std::string, std::set<std::string>> truth{{"q1", {"a"}}};
    evir::MetricReport report = evir::evaluate_run(run, truth, {1, 5});
    std::string text = evir::format_report(report);
    CHECK(text.find("mAP") != std::string::npos);
    CHECK(text.find("mRR") != std::string::npos);
    CHECK(text.find("R@1") != std::string::npos);
    CHECK(text.find("R@5") != std::string::npos);
    CHECK(text.find("1.0000") != std::string::npos);
}

TEST_CASE("save_report_json: per-query values survive the round trip") {
    testsupport::TempDir dir;
    RunResult run;
    run["q1"] = ranking_of({"a", "b"});
    run["q2"] = ranking_of({"x"});
    std::map<std::string, std::set<std::string>> truth{{"q1", {"b"}}, {"q2", {"y"}}};
    evir::MetricReport report = evir::evaluate_run(run, truth, {1});
    std::string path = dir.file("report.json");
    evir::save_report_json(path, report);

    nlohmann::json doc = nlohmann::json::parse(testsupport::read_file(path));
    CHECK(doc.at("map").get<double>() == doctest::Approx(report.map_score).epsilon(1e-12));
    CHECK(doc.at("mrr").get<double>() == doctest::Approx(report.mrr_score).epsilon(1e-12));
    CHECK(doc.at("per_query").size() == 2);
    CHECK(doc.at("per_query").at("q1").at("ap").get<double>() == 0.5);
}