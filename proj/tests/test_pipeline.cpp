#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "evir/config.hpp"
#include "evir/errors.hpp"
#include "evir/metrics.hpp"
#include "evir/pipeline.hpp"
#include "evir/synthetic.hpp"
#include "support/oracles.hpp"
#include "support/tempdir.hpp"

using evir::Pipeline;
using evir::PipelineConfig;
using evir::Query;
using evir::QueryTrace;
using evir::RankedList;
using evir::RetrieveResult;
using evir::SyntheticSpec;

namespace {

SyntheticSpec small_spec(bool adversarial = false) {
    SyntheticSpec spec;
    spec.seed = 404;
    spec.n_articles = 80;
    spec.n_queries = 20;
    spec.embedding_dim = 12;
    spec.adversarial = adversarial;
    return spec;
}

std::set<std::string> id_set(const RankedList& list) {
    std::set<std::string> ids;
    for (const auto& entry : list) ids.insert(entry.id);
    return ids;
}

}  // namespace

TEST_CASE("pipeline: planted images come back at rank 1 across a synthetic corpus") {
    testsupport::TempDir dir;
    evir::SyntheticPaths paths = evir::generate_synthetic(small_spec(), dir.path().string());
    Pipeline pipeline = Pipeline::build(PipelineConfig::load(paths.config));
    evir::TruthMap truth = evir::load_ground_truth(paths.ground_truth);

    evir::RunResult run;
    for (const Query& query : evir::load_queries(paths.queries)) {
        RetrieveResult result = pipeline.retrieve(query);
        CHECK(result.dropped_images == 0);
        run[query.id] = result.images;
    }
    evir::MetricReport report = evir::evaluate_run(run, truth, {1, 5, 10});
    CHECK(report.map_score == 1.0);
    CHECK(report.mrr_score == 1.0);
    CHECK(report.recall_at.at(1) == 1.0);
    CHECK(report.missing_from_run == 0);
}

TEST_CASE("pipeline: run output matches the monolithic brute-force reference byte for byte") {
    testsupport::TempDir dir;
    evir::SyntheticPaths paths = evir::generate_synthetic(small_spec(), dir.path().string());
    Pipeline pipeline = Pipeline::build(PipelineConfig::load(paths.config));

    std::vector<evir::RunEntry> entries;
    for (const Query& query : evir::load_queries(paths.queries)) {
        entries.emplace_back(query.id, pipeline.retrieve(query).images);
    }
    std::string engine_run = dir.file("engine-run.jsonl");
    evir::save_run(engine_run, entries);

    std::string oracle_run = dir.file("oracle-run.jsonl");
    evir::save_run(oracle_run, oracle::run_pipeline(dir.path().string()));

    CHECK(testsupport::read_file(engine_run) == testsupport::read_file(oracle_run));
}

TEST_CASE("pipeline: adversarial distractors lose to the entity type weights") {
    testsupport::TempDir dir;
    evir::SyntheticPaths paths = evir::generate_synthetic(small_spec(true), dir.path().string());
    Pipeline pipeline = Pipeline::build(PipelineConfig::load(paths.config));
    evir::TruthMap truth = evir::load_ground_truth(paths.ground_truth);

    evir::RunResult run;
    for (const Query& query : evir::load_queries(paths.queries)) {
        QueryTrace trace;
        RetrieveResult result = pipeline.retrieve(query, &trace);
        run[query.id] = result.images;
        // the entity branch alone must already place the planted article first
        REQUIRE(!trace.entity_branch.empty());
        std::string planted = trace.entity_branch[0].id;
        REQUIRE(trace.entity_branch.size() >= 2);
        // ... and the distractor (smaller id, same df) directly behind it
        CHECK(trace.entity_branch[1].id < planted);
    }
    evir::MetricReport report = evir::evaluate_run(run, truth, {1});
    CHECK(report.map_score == 1.0);
    CHECK(report.recall_at.at(1) == 1.0);
}

TEST_CASE("pipeline: trace stages nest and timings partition the total") {
    testsupport::TempDir dir;
    evir::SyntheticPaths paths = evir::generate_synthetic(small_spec(), dir.path().string());
    Pipeline pipeline = Pipeline::build(PipelineConfig::load(paths.config));
    const PipelineConfig& config = pipeline.config();

    for (const Query& query : evir::load_queries(paths.queries)) {
        QueryTrace trace;
        RetrieveResult result = pipeline.retrieve(query, &trace);

        // fused articles come only from the two branches and respect the cut
        std::set<std::string> branch_union = id_set(trace.entity_branch);
        for (const auto& entry : trace.bm25_branch) branch_union.insert(entry.id);
        CHECK(trace.fused_articles.size() <= config.top_k_articles);
        for (const auto& entry : trace.fused_articles) CHECK(branch_union.contains(entry.id));

        // both slots rank exactly the same candidate set
        CHECK(id_set(trace.slot_a_images) == id_set(trace.slot_b_images));

        // final images are fused from the slots and cut to top_n
        CHECK(trace.final_images.size() <= config.top_n_images);
        for (const auto& entry : trace.final_images) {
            CHECK(id_set(trace.slot_a_images).contains(entry.id));
        }
        CHECK(result.images == trace.final_images);

        // candidate images belong to fused articles
        const evir::Corpus& corpus = pipeline.corpus();
        std::set<std::string> allowed;
        for (const auto& article : trace.fused_articles) {
            for (const std::string& image : corpus.images_of_article(article.id)) allowed.insert(image);
        }
        for (const auto& entry : trace.slot_a_images) CHECK(allowed.contains(entry.id));

        // stage timings partition the total
        double stage_sum =
            trace.entity_ms + trace.bm25_ms + trace.fuse_ms + trace.candidates_ms + trace.rerank_ms;
        CHECK(trace.total_ms > 0.0);
        CHECK(std::abs(stage_sum - trace.total_ms) <= 0.05 * trace.total_ms + 1e-6);
    }
}

TEST_CASE("pipeline: retrieve is deterministic call over call") {
    testsupport::TempDir dir;
    evir::SyntheticPaths paths = evir::generate_synthetic(small_spec(), dir.path().string());
    Pipeline pipeline = Pipeline::build(PipelineConfig::load(paths.config));
    std::vector<Query> queries = evir::load_queries(paths.queries);

    for (const Query& query : queries) {
        RetrieveResult first = pipeline.retrieve(query);
        RetrieveResult second = pipeline.retrieve(query);
        REQUIRE(first.images.size() == second.images.size());
        for (std::size_t i = 0; i < first.images.size(); ++i) {
            CHECK(first.images[i].id == second.images[i].id);
            CHECK(first.images[i].score == second.images[i].score);  // bitwise
        }
    }
}

TEST_CASE("pipeline: stage one equals its own branches fused and cut") {
    testsupport::TempDir dir;
    evir::SyntheticPaths paths = evir::generate_synthetic(small_spec(), dir.path().string());
    Pipeline pipeline = Pipeline::build(PipelineConfig::load(paths.config));

    for (const Query& query : evir::load_queries(paths.queries)) {
        QueryTrace trace;
        pipeline.retrieve(query, &trace);
        RankedList fused = evir::rrf({trace.entity_branch, trace.bm25_branch}, pipeline.config().rrf_k);
        evir::truncate_ranked(fused, pipeline.config().top_k_articles);
        CHECK(trace.fused_articles == fused);
        CHECK(pipeline.search_articles(query) == fused);
    }
}

TEST_CASE("pipeline: entity-less queries degrade to the lexical branch") {
    testsupport::TempDir dir;
    evir::SyntheticPaths paths = evir::generate_synthetic(small_spec(), dir.path().string());
    Pipeline pipeline = Pipeline::build(PipelineConfig::load(paths.config));

    Query query;
    query.id = "q0000";  // reuse an embedded query id so embeddings exist
    query.text = "gibberish mentioning nobody the gazetteer knows";
    QueryTrace trace;
    RetrieveResult result = pipeline.retrieve(query, &trace);
    CHECK(trace.entities.empty());
    CHECK(trace.entity_branch.empty());
    // fusion then carries only lexical evidence: same as fusing the one branch
    RankedList lexical_only = evir::rrf({trace.bm25_branch}, pipeline.config().rrf_k);
    evir::truncate_ranked(lexical_only, pipeline.config().top_k_articles);
    CHECK(trace.fused_articles == lexical_only);
    CHECK(result.images.size() <= pipeline.config().top_n_images);
}

TEST_CASE("pipeline: queries matching nothing return empty results") {
    testsupport::TempDir dir;
    evir::SyntheticPaths paths = evir::generate_synthetic(small_spec(), dir.path().string());
    Pipeline pipeline = Pipeline::build(PipelineConfig::load(paths.config));

    Query query;
    query.id = "q0001";
    query.text = "zzz qqq xxx";  // no token and no entity in the corpus
    QueryTrace trace;
    RetrieveResult result = pipeline.retrieve(query, &trace);
    CHECK(trace.entity_branch.empty());
    CHECK(trace.bm25_branch.empty());
    CHECK(trace.fused_articles.empty());
    CHECK(result.images.empty());
}

TEST_CASE("pipeline: a query without stored embeddings is a missing-embedding error") {
    testsupport::TempDir dir;
    evir::SyntheticPaths paths = evir::generate_synthetic(small_spec(), dir.path().string());
    Pipeline pipeline = Pipeline::build(PipelineConfig::load(paths.config));

    Query query;
    query.id = "q-neverseen";
    query.text = "any text that reaches stage two";
    // make sure stage one finds something: borrow words from a real article
    query.text = pipeline.corpus().articles().front().title;
    try {
        pipeline.retrieve(query);
        FAIL("expected DataError");
    } catch (const evir::DataError& e) {
        CHECK(e.kind() == evir::DataErrorKind::MissingEmbedding);
    }
}

TEST_CASE("pipeline: persisted index is reused, mismatched parameters rejected") {
    testsupport::TempDir dir;
    evir::SyntheticPaths paths = evir::generate_synthetic(small_spec(), dir.path().string());
    PipelineConfig config = PipelineConfig::load(paths.config);

    // build once, save the index where the config expects it
    Pipeline fresh = Pipeline::build(config);
    fresh.index().save(config.index_path);

    Pipeline reloaded = Pipeline::build(config);
    CHECK(reloaded.index().doc_count() == fresh.index().doc_count());
    CHECK(reloaded.index().terms() == fresh.index().terms());

    // same queries, same answers, whether the index was built or loaded
    for (const Query& query : evir::load_queries(paths.queries)) {
        CHECK(fresh.retrieve(query).images == reloaded.retrieve(query).images);
    }

    // a config whose BM25 parameters disagree with the stored index must refuse
    PipelineConfig mismatched = config;
    mismatched.bm25.k1 = 9.9;
    CHECK_THROWS_AS(Pipeline::build(mismatched), evir::UsageError);
}

TEST_CASE("synthetic generator: byte-deterministic for a fixed spec") {
    testsupport::TempDir dir_a;
    testsupport::TempDir dir_b;
    evir::SyntheticPaths a = evir::generate_synthetic(small_spec(), dir_a.path().string());
    evir::SyntheticPaths b = evir::generate_synthetic(small_spec(), dir_b.path().string());

    for (const char* name : {"config.json", "articles.jsonl", "images.jsonl", "queries.jsonl",
                             "ground_truth.jsonl", "embeddings_a.evec", "embeddings_b.evec",
                             "queries_a.evec", "queries_b.evec", "gazetteer.tsv", "synonyms.tsv",
                             "stopwords.txt"}) {
        CHECK(testsupport::read_file(dir_a.file(name)) == testsupport::read_file(dir_b.file(name)));
    }
    CHECK(a.config == dir_a.file("config.json"));
    CHECK(b.config == dir_b.file("config.json"));
}

TEST_CASE("synthetic generator: different seeds change the payload") {
    testsupport::TempDir dir_a;
    testsupport::TempDir dir_b;
    SyntheticSpec spec = small_spec();
    evir::generate_synthetic(spec, dir_a.path().string());
    spec.seed = 405;
    evir::generate_synthetic(spec, dir_b.path().string());
    CHECK(testsupport::read_file(dir_a.file("embeddings_a.evec")) !=
          testsupport::read_file(dir_b.file("embeddings_a.evec")));
}

TEST_CASE("synthetic generator: spec validation") {
    testsupport::TempDir dir;
    SyntheticSpec spec;

    spec.n_queries = 0;
    CHECK_THROWS_AS(evir::generate_synthetic(spec, dir.path().string()), evir::UsageError);

    spec = SyntheticSpec{};
    spec.n_articles = 10;
    spec.n_queries = 20;  // needs 2 * n_queries articles
    CHECK_THROWS_AS(evir::generate_synthetic(spec, dir.path().string()), evir::UsageError);

    spec = SyntheticSpec{};
    spec.embedding_dim = 4;  // too small for the separation construction
    CHECK_THROWS_AS(evir::generate_synthetic(spec, dir.path().string()), evir::UsageError);
}

TEST_CASE("config: strict keys, resolved paths, validated numbers") {
    testsupport::TempDir dir;
    evir::SyntheticPaths paths = evir::generate_synthetic(small_spec(), dir.path().string());

    PipelineConfig config = PipelineConfig::load(paths.config);
    CHECK(config.articles == dir.file("articles.jsonl"));
    CHECK(config.bm25.k1 == 1.2);
    CHECK(config.bm25.b == 0.75);
    CHECK(config.rrf_k == 60.0);
    CHECK(config.top_k_articles == 30);
    CHECK(config.top_n_images == 10);
    CHECK(config.weights.get(evir::EntityType::Person) == 4.3);
    CHECK(config.slot_a.boost.alpha == 10.0);

    // unknown keys anywhere are rejected
    std::string text = testsupport::read_file(paths.config);
    std::string broken = dir.file("broken.json");
    testsupport::write_file(broken, text.substr(0, 1) + "\"surprise\": 1, " + text.substr(1));
    CHECK_THROWS_AS(PipelineConfig::load(broken), evir::DataError);

    // out-of-range numbers are rejected
    std::size_t at = text.find("\"b\": 0.75");
    REQUIRE(at != std::string::npos);
    std::string bad_b = text;
    bad_b.replace(at, 9, "\"b\": 1.75");
    std::string bad_path = dir.file("bad_b.json");
    testsupport::write_file(bad_path, bad_b);
    CHECK_THROWS_AS(PipelineConfig::load(bad_path), evir::DataError);
}