#include "evir/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <limits>
#include <set>

#include "evir/errors.hpp"

namespace evir {

namespace {

constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

using Clock = std::chrono::steady_clock;

double ms_between(Clock::time_point from, Clock::time_point to) {
    return std::chrono::duration<double, std::milli>(to - from).count();
}

void check_slot_dims(const char* slot, const EmbeddingMatrix& images, const EmbeddingMatrix& queries) {
    if (images.dim() != queries.dim()) {
        throw DataError(DataErrorKind::DimMismatch,
                        std::string("slot ") + slot + ": image embeddings have dim " + std::to_string(images.dim()) +
                            ", query embeddings have dim " + std::to_string(queries.dim()));
    }
}

}  // namespace

Pipeline Pipeline::build(const PipelineConfig& config) {
    Pipeline pipeline;
    pipeline.config_ = config;

    pipeline.corpus_ = Corpus::load(config.articles, config.images);
    if (!config.entity_sidecar.empty()) pipeline.corpus_.apply_entity_sidecar(config.entity_sidecar);
    if (!config.gazetteer.empty()) {
        pipeline.gazetteer_ = Gazetteer::load(config.gazetteer);
        pipeline.has_gazetteer_ = true;
        pipeline.corpus_.populate_entities(pipeline.gazetteer_);
    }
    if (!config.synonyms.empty()) pipeline.synonyms_ = SynonymTable::load(config.synonyms);

    if (!config.stopwords.empty()) pipeline.analysis_.stopwords = load_stopwords(config.stopwords);
    pipeline.analysis_.stem = config.stem;

    if (!config.index_path.empty() && std::filesystem::exists(config.index_path)) {
        pipeline.index_ = InvertedIndex::load(config.index_path);
        if (pipeline.index_.params().k1 != config.bm25.k1 || pipeline.index_.params().b != config.bm25.b ||
            pipeline.index_.stemmed() != config.stem) {
            throw UsageError(config.index_path + " was built with different analyzer or BM25 settings; rerun `index`");
        }
        std::vector<std::string> corpus_ids;
        corpus_ids.reserve(pipeline.corpus_.articles().size());
        for (const Article& article : pipeline.corpus_.articles()) corpus_ids.push_back(article.id);
        if (pipeline.index_.doc_ids() != corpus_ids) {
            throw UsageError(config.index_path + " does not cover the configured corpus; rerun `index`");
        }
    } else {
        pipeline.index_ = InvertedIndex::build(pipeline.corpus_, pipeline.analysis_, config.bm25);
    }

    pipeline.entity_index_ = EntityIndex::build(pipeline.corpus_);

    pipeline.images_a_ = EmbeddingMatrix::load(config.slot_a.image_embeddings);
    pipeline.queries_a_ = EmbeddingMatrix::load(config.slot_a.query_embeddings);
    check_slot_dims("A", pipeline.images_a_, pipeline.queries_a_);
    pipeline.images_b_ = EmbeddingMatrix::load(config.slot_b.image_embeddings);
    pipeline.queries_b_ = EmbeddingMatrix::load(config.slot_b.query_embeddings);
    check_slot_dims("B", pipeline.images_b_, pipeline.queries_b_);
    return pipeline;
}

std::vector<Entity> Pipeline::query_entities(const Query& query) const {
    std::vector<Entity> entities = query.entities;
    if (entities.empty() && has_gazetteer_) entities = gazetteer_.extract(query.text);
    return expand_entities(entities, synonyms_);
}

RankedList Pipeline::search_articles(const Query& query) const {
    RankedList entity_branch = entity_index_.search(query_entities(query), config_.weights, kUnbounded);
    RankedList bm25_branch = index_.search(tokenize(query.text, analysis_), kUnbounded);
    RankedList fused = rrf({std::move(entity_branch), std::move(bm25_branch)}, config_.rrf_k);
    truncate_ranked(fused, config_.top_k_articles);
    return fused;
}

RetrieveResult Pipeline::retrieve(const Query& query, QueryTrace* trace) const {
    auto t0 = Clock::now();
    std::vector<Entity> entities = query_entities(query);
    RankedList entity_branch = entity_index_.search(entities, config_.weights, kUnbounded);

    auto t1 = Clock::now();
    RankedList bm25_branch = index_.search(tokenize(query.text, analysis_), kUnbounded);

    auto t2 = Clock::now();
    RankedList fused = rrf({entity_branch, bm25_branch}, config_.rrf_k);
    truncate_ranked(fused, config_.top_k_articles);

    auto t3 = Clock::now();
    if (!queries_a_.contains(query.id)) {
        throw DataError(DataErrorKind::MissingEmbedding,
                        "query `" + query.id + "` is missing from " + config_.slot_a.query_embeddings);
    }
    if (!queries_b_.contains(query.id)) {
        throw DataError(DataErrorKind::MissingEmbedding,
                        "query `" + query.id + "` is missing from " + config_.slot_b.query_embeddings);
    }
    std::span<const float> query_a = queries_a_.vector_of(query.id);
    std::span<const float> query_b = queries_b_.vector_of(query.id);

    // Walk articles best-first so each image keeps the best rank that reaches it.
    std::vector<Candidate> slot_a;
    std::vector<Candidate> slot_b;
    std::set<std::string> assigned;
    std::size_t dropped = 0;
    for (std::size_t r = 0; r < fused.size(); ++r) {
        for (const std::string& image_id : corpus_.images_of_article(fused[r].id)) {
            if (!assigned.insert(image_id).second) continue;
            if (!images_a_.contains(image_id) || !images_b_.contains(image_id)) {
                ++dropped;
                continue;
            }
            auto rank = static_cast<std::uint32_t>(r + 1);
            slot_a.push_back(Candidate{image_id, dot(query_a, images_a_.vector_of(image_id)), rank});
            slot_b.push_back(Candidate{image_id, dot(query_b, images_b_.vector_of(image_id)), rank});
        }
    }

    auto t4 = Clock::now();
    RankedList ranked_a = rank_candidates(slot_a, config_.slot_a.boost);
    RankedList ranked_b = rank_candidates(slot_b, config_.slot_b.boost);
    RankedList final_images = rrf({ranked_a, ranked_b}, config_.rrf_k);
    truncate_ranked(final_images, config_.top_n_images);
    auto t5 = Clock::now();

    if (trace) {
        trace->entities = std::move(entities);
        trace->entity_branch = std::move(entity_branch);
        trace->bm25_branch = std::move(bm25_branch);
        trace->fused_articles = std::move(fused);
        trace->slot_a_images = std::move(ranked_a);
        trace->slot_b_images = std::move(ranked_b);
        trace->final_images = final_images;
        trace->entity_ms = ms_between(t0, t1);
        trace->bm25_ms = ms_between(t1, t2);
        trace->fuse_ms = ms_between(t2, t3);
        trace->candidates_ms = ms_between(t3, t4);
        trace->rerank_ms = ms_between(t4, t5);
        trace->total_ms = ms_between(t0, t5);
    }
    return RetrieveResult{std::move(final_images), dropped};
}

}  // namespace evir
