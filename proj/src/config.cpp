#include "evir/config.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "evir/errors.hpp"

namespace evir {

namespace {

using nlohmann::json;

[[noreturn]] void bad_config(const std::string& path, const std::string& what) {
    throw DataError(DataErrorKind::MalformedRecord, path + ": " + what);
}

void reject_unknown_keys(const json& object, std::initializer_list<const char*> known, const std::string& path,
                         const std::string& scope) {
    for (const auto& [key, value] : object.items()) {
        bool ok = false;
        for (const char* name : known) ok = ok || key == name;
        if (!ok) bad_config(path, "unknown key `" + scope + key + "`");
    }
}

double require_number(const json& object, const char* key, const std::string& path, const std::string& scope) {
    if (!object.contains(key) || !object[key].is_number()) {
        bad_config(path, "`" + scope + key + "` must be a number");
    }
    return object[key].get<double>();
}

std::string require_path(const json& object, const char* key, const std::filesystem::path& base,
                         const std::string& path, const std::string& scope) {
    if (!object.contains(key) || !object[key].is_string()) {
        bad_config(path, "`" + scope + key + "` must be a path string");
    }
    std::filesystem::path p = object[key].get<std::string>();
    if (p.is_relative()) p = base / p;
    return p.lexically_normal().string();
}

std::string optional_path(const json& object, const char* key, const std::filesystem::path& base,
                          const std::string& path, const std::string& scope) {
    if (!object.contains(key)) return {};
    return require_path(object, key, base, path, scope);
}

SlotConfig parse_slot(const json& object, const std::filesystem::path& base, const std::string& path,
                      const std::string& scope) {
    reject_unknown_keys(object, {"image_embeddings", "query_embeddings", "boost"}, path, scope);
    SlotConfig slot;
    slot.image_embeddings = require_path(object, "image_embeddings", base, path, scope);
    slot.query_embeddings = require_path(object, "query_embeddings", base, path, scope);
    if (object.contains("boost")) {
        const json& boost = object["boost"];
        if (!boost.is_object()) bad_config(path, "`" + scope + "boost` must be an object");
        reject_unknown_keys(boost, {"alpha", "beta", "gamma"}, path, scope + "boost.");
        if (boost.contains("alpha")) slot.boost.alpha = require_number(boost, "alpha", path, scope + "boost.");
        if (boost.contains("beta")) slot.boost.beta = require_number(boost, "beta", path, scope + "boost.");
        if (boost.contains("gamma")) slot.boost.gamma = require_number(boost, "gamma", path, scope + "boost.");
    }
    return slot;
}

}  // namespace

PipelineConfig PipelineConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(DataErrorKind::MissingFile, "cannot open " + path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) bad_config(path, "not a JSON object");

    std::filesystem::path base = std::filesystem::path(path).parent_path();
    reject_unknown_keys(doc, {"corpus", "analysis", "bm25", "entities", "fusion", "slot_a", "slot_b"}, path, "");

    PipelineConfig config;

    if (!doc.contains("corpus") || !doc["corpus"].is_object()) bad_config(path, "missing `corpus` object");
    const json& corpus = doc["corpus"];
    reject_unknown_keys(corpus, {"articles", "images", "entity_sidecar", "index"}, path, "corpus.");
    config.articles = require_path(corpus, "articles", base, path, "corpus.");
    config.images = require_path(corpus, "images", base, path, "corpus.");
    config.entity_sidecar = optional_path(corpus, "entity_sidecar", base, path, "corpus.");
    config.index_path = optional_path(corpus, "index", base, path, "corpus.");

    if (doc.contains("analysis")) {
        const json& analysis = doc["analysis"];
        if (!analysis.is_object()) bad_config(path, "`analysis` must be an object");
        reject_unknown_keys(analysis, {"stopwords", "stem"}, path, "analysis.");
        config.stopwords = optional_path(analysis, "stopwords", base, path, "analysis.");
        if (analysis.contains("stem")) {
            if (!analysis["stem"].is_boolean()) bad_config(path, "`analysis.stem` must be a boolean");
            config.stem = analysis["stem"].get<bool>();
        }
    }

    if (doc.contains("bm25")) {
        const json& bm25 = doc["bm25"];
        if (!bm25.is_object()) bad_config(path, "`bm25` must be an object");
        reject_unknown_keys(bm25, {"k1", "b"}, path, "bm25.");
        if (bm25.contains("k1")) config.bm25.k1 = require_number(bm25, "k1", path, "bm25.");
        if (bm25.contains("b")) config.bm25.b = require_number(bm25, "b", path, "bm25.");
        if (config.bm25.k1 < 0.0) bad_config(path, "`bm25.k1` must be >= 0");
        if (config.bm25.b < 0.0 || config.bm25.b > 1.0) bad_config(path, "`bm25.b` must be in [0, 1]");
    }

    if (doc.contains("entities")) {
        const json& entities = doc["entities"];
        if (!entities.is_object()) bad_config(path, "`entities` must be an object");
        reject_unknown_keys(entities, {"gazetteer", "synonyms", "weights"}, path, "entities.");
        config.gazetteer = optional_path(entities, "gazetteer", base, path, "entities.");
        config.synonyms = optional_path(entities, "synonyms", base, path, "entities.");
        if (entities.contains("weights")) {
            const json& weights = entities["weights"];
            if (!weights.is_object()) bad_config(path, "`entities.weights` must be an object");
            for (const auto& [label, value] : weights.items()) {
                EntityType type = entity_type_from_label(label);
                if (type == EntityType::Other && label != to_label(EntityType::Other)) {
                    bad_config(path, "unknown entity type `" + label + "` in `entities.weights`");
                }
                if (!value.is_number()) bad_config(path, "`entities.weights." + label + "` must be a number");
                double weight = value.get<double>();
                if (weight < 0.0) bad_config(path, "`entities.weights." + label + "` must be >= 0");
                config.weights.set(type, weight);
            }
        }
    }

    if (doc.contains("fusion")) {
        const json& fusion = doc["fusion"];
        if (!fusion.is_object()) bad_config(path, "`fusion` must be an object");
        reject_unknown_keys(fusion, {"rrf_k", "top_k_articles", "top_n_images"}, path, "fusion.");
        if (fusion.contains("rrf_k")) config.rrf_k = require_number(fusion, "rrf_k", path, "fusion.");
        if (config.rrf_k <= 0.0) bad_config(path, "`fusion.rrf_k` must be positive");
        auto read_count = [&](const char* key, std::size_t& out) {
            if (!fusion.contains(key)) return;
            if (!fusion[key].is_number_unsigned() || fusion[key].get<std::uint64_t>() < 1) {
                bad_config(path, std::string("`fusion.") + key + "` must be an integer >= 1");
            }
            out = fusion[key].get<std::size_t>();
        };
        read_count("top_k_articles", config.top_k_articles);
        read_count("top_n_images", config.top_n_images);
    }

    for (const char* key : {"slot_a", "slot_b"}) {
        if (!doc.contains(key) || !doc[key].is_object()) {
            bad_config(path, std::string("missing `") + key + "` object");
        }
    }
    config.slot_a = parse_slot(doc["slot_a"], base, path, "slot_a.");
    config.slot_b = parse_slot(doc["slot_b"], base, path, "slot_b.");
    return config;
}

}  // namespace evir
