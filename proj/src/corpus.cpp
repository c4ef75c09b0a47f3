#include "evir/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <json.hpp>

#include "evir/analysis.hpp"
#include "evir/errors.hpp"

namespace evir {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& path, std::size_t line_no, const std::string& what) {
    throw DataError(DataErrorKind::MalformedRecord, path + ":" + std::to_string(line_no) + ": " + what);
}

// Calls `handle(record, line_no)` for every non-blank line.
template <typename Handler>
void for_each_record(const std::string& path, Handler&& handle) {
    std::ifstream in(path);
    if (!in) throw DataError(DataErrorKind::MissingFile, "cannot open " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json record = json::parse(line, nullptr, false);
        if (record.is_discarded() || !record.is_object()) {
            malformed(path, line_no, "not a JSON object");
        }
        handle(record, line_no);
    }
}

std::string require_string(const json& record, const char* key, const std::string& path, std::size_t line_no) {
    auto it = record.find(key);
    if (it == record.end() || !it->is_string()) {
        malformed(path, line_no, std::string("missing or non-string field `") + key + "`");
    }
    return it->get<std::string>();
}

std::vector<std::string> require_string_list(const json& record, const char* key, const std::string& path,
                                             std::size_t line_no) {
    auto it = record.find(key);
    if (it == record.end() || !it->is_array()) {
        malformed(path, line_no, std::string("missing or non-list field `") + key + "`");
    }
    std::vector<std::string> out;
    out.reserve(it->size());
    for (const json& element : *it) {
        if (!element.is_string()) malformed(path, line_no, std::string("non-string element in `") + key + "`");
        out.push_back(element.get<std::string>());
    }
    return out;
}

std::vector<Entity> parse_entities(const json& record, const std::string& path, std::size_t line_no) {
    auto it = record.find("entities");
    if (it == record.end()) return {};
    if (!it->is_array()) malformed(path, line_no, "`entities` is not a list");
    std::vector<Entity> out;
    out.reserve(it->size());
    for (const json& element : *it) {
        if (!element.is_object() || !element.contains("text") || !element["text"].is_string() ||
            !element.contains("type") || !element["type"].is_string()) {
            malformed(path, line_no, "entity elements need string `text` and `type`");
        }
        std::string text = element["text"].get<std::string>();
        if (canonicalize(text).empty()) malformed(path, line_no, "entity text is empty");
        out.push_back(make_entity(std::move(text), entity_type_from_label(element["type"].get<std::string>())));
    }
    return out;
}

json entities_to_json(const std::vector<Entity>& entities) {
    json list = json::array();
    for (const Entity& entity : entities) {
        list.push_back({{"text", entity.text}, {"type", std::string(to_label(entity.type))}});
    }
    return list;
}

}  // namespace

Corpus Corpus::load(const std::string& articles_path, const std::string& images_path) {
    std::vector<Article> articles;
    for_each_record(articles_path, [&](const json& record, std::size_t line_no) {
        Article article;
        article.id = require_string(record, "id", articles_path, line_no);
        if (article.id.empty()) malformed(articles_path, line_no, "article id is empty");
        article.title = require_string(record, "title", articles_path, line_no);
        article.body = require_string(record, "body", articles_path, line_no);
        article.image_ids = require_string_list(record, "image_ids", articles_path, line_no);
        std::set<std::string> unique(article.image_ids.begin(), article.image_ids.end());
        if (unique.size() != article.image_ids.size()) {
            throw DataError(DataErrorKind::DuplicateId,
                            articles_path + ":" + std::to_string(line_no) + ": repeated image id in article `" +
                                article.id + "`");
        }
        article.entities = parse_entities(record, articles_path, line_no);
        articles.push_back(std::move(article));
    });

    std::vector<ImageRecord> images;
    for_each_record(images_path, [&](const json& record, std::size_t line_no) {
        ImageRecord image;
        image.id = require_string(record, "id", images_path, line_no);
        if (image.id.empty()) malformed(images_path, line_no, "image id is empty");
        image.article_ids = require_string_list(record, "article_ids", images_path, line_no);
        if (image.article_ids.empty()) malformed(images_path, line_no, "image `" + image.id + "` links no articles");
        if (record.contains("caption")) {
            if (!record["caption"].is_string()) malformed(images_path, line_no, "`caption` is not a string");
            image.caption = record["caption"].get<std::string>();
        }
        images.push_back(std::move(image));
    });

    return from_records(std::move(articles), std::move(images));
}

Corpus Corpus::from_records(std::vector<Article> articles, std::vector<ImageRecord> images) {
    Corpus corpus;
    corpus.articles_ = std::move(articles);
    corpus.images_ = std::move(images);
    std::sort(corpus.articles_.begin(), corpus.articles_.end(),
              [](const Article& a, const Article& b) { return a.id < b.id; });
    std::sort(corpus.images_.begin(), corpus.images_.end(),
              [](const ImageRecord& a, const ImageRecord& b) { return a.id < b.id; });
    corpus.rebuild_lookups();
    return corpus;
}

void Corpus::rebuild_lookups() {
    article_index_.clear();
    image_index_.clear();
    article_images_.clear();

    for (std::size_t i = 0; i < articles_.size(); ++i) {
        if (articles_[i].id.empty()) {
            throw DataError(DataErrorKind::MalformedRecord, "article with empty id");
        }
        if (!article_index_.emplace(articles_[i].id, i).second) {
            throw DataError(DataErrorKind::DuplicateId, "article id `" + articles_[i].id + "` appears twice");
        }
    }
    for (std::size_t i = 0; i < images_.size(); ++i) {
        if (!image_index_.emplace(images_[i].id, i).second) {
            throw DataError(DataErrorKind::DuplicateId, "image id `" + images_[i].id + "` appears twice");
        }
    }
    // Link closure: every image must resolve to loaded articles.
    for (const ImageRecord& image : images_) {
        for (const std::string& article_id : image.article_ids) {
            if (!article_index_.contains(article_id)) {
                throw DataError(DataErrorKind::DanglingReference,
                                "image `" + image.id + "` references unknown article `" + article_id + "`");
            }
            auto& linked = article_images_[article_id];
            if (std::find(linked.begin(), linked.end(), image.id) == linked.end()) {
                linked.push_back(image.id);
            }
        }
    }
    for (auto& [article_id, linked] : article_images_) {
        std::sort(linked.begin(), linked.end());
    }
}

void Corpus::save(const std::string& articles_path, const std::string& images_path) const {
    std::ofstream articles_out(articles_path);
    if (!articles_out) throw DataError(DataErrorKind::MissingFile, "cannot write " + articles_path);
    for (const Article& article : articles_) {
        json record{{"id", article.id}, {"title", article.title}, {"body", article.body},
                    {"image_ids", article.image_ids}};
        if (!article.entities.empty()) record["entities"] = entities_to_json(article.entities);
        articles_out << record.dump() << '\n';
    }

    std::ofstream images_out(images_path);
    if (!images_out) throw DataError(DataErrorKind::MissingFile, "cannot write " + images_path);
    for (const ImageRecord& image : images_) {
        json record{{"id", image.id}, {"article_ids", image.article_ids}};
        if (!image.caption.empty()) record["caption"] = image.caption;
        images_out << record.dump() << '\n';
    }
}

const Article* Corpus::find_article(const std::string& id) const {
    auto it = article_index_.find(id);
    return it == article_index_.end() ? nullptr : &articles_[it->second];
}

const ImageRecord* Corpus::find_image(const std::string& id) const {
    auto it = image_index_.find(id);
    return it == image_index_.end() ? nullptr : &images_[it->second];
}

const std::vector<std::string>& Corpus::images_of_article(const std::string& article_id) const {
    static const std::vector<std::string> kEmpty;
    auto it = article_images_.find(article_id);
    return it == article_images_.end() ? kEmpty : it->second;
}

void Corpus::apply_entity_sidecar(const std::string& path) {
    for (auto& [owner_id, entities] : load_entity_sidecar(path)) {
        auto it = article_index_.find(owner_id);
        if (it != article_index_.end()) articles_[it->second].entities = std::move(entities);
    }
}

void Corpus::populate_entities(const Gazetteer& gazetteer) {
    for (Article& article : articles_) {
        if (article.entities.empty()) {
            article.entities = gazetteer.extract(article.title + " " + article.body);
        }
    }
}

bool Corpus::operator==(const Corpus& other) const {
    return articles_ == other.articles_ && images_ == other.images_;
}

std::vector<Query> load_queries(const std::string& path) {
    std::vector<Query> queries;
    std::set<std::string> seen;
    for_each_record(path, [&](const json& record, std::size_t line_no) {
        Query query;
        query.id = require_string(record, "id", path, line_no);
        if (query.id.empty()) malformed(path, line_no, "query id is empty");
        if (!seen.insert(query.id).second) {
            throw DataError(DataErrorKind::DuplicateId,
                            path + ":" + std::to_string(line_no) + ": query id `" + query.id + "` appears twice");
        }
        query.text = require_string(record, "text", path, line_no);
        query.entities = parse_entities(record, path, line_no);
        queries.push_back(std::move(query));
    });
    return queries;
}

TruthMap load_ground_truth(const std::string& path) {
    TruthMap truth;
    for_each_record(path, [&](const json& record, std::size_t line_no) {
        std::string query_id = require_string(record, "query_id", path, line_no);
        if (query_id.empty()) malformed(path, line_no, "query_id is empty");
        std::vector<std::string> image_ids = require_string_list(record, "image_ids", path, line_no);
        if (image_ids.empty()) {
            throw DataError(DataErrorKind::EmptyRelevantSet,
                            path + ":" + std::to_string(line_no) + ": query `" + query_id + "` lists no images");
        }
        // Repeated lines for the same query merge their image sets.
        truth[query_id].insert(image_ids.begin(), image_ids.end());
    });
    return truth;
}

std::map<std::string, std::vector<Entity>> load_entity_sidecar(const std::string& path) {
    std::map<std::string, std::vector<Entity>> sidecar;
    for_each_record(path, [&](const json& record, std::size_t line_no) {
        std::string owner_id = require_string(record, "owner_id", path, line_no);
        if (owner_id.empty()) malformed(path, line_no, "owner_id is empty");
        if (!record.contains("entities")) malformed(path, line_no, "missing `entities`");
        // Later lines for the same owner win, like the sidecar wins over
        // embedded entities.
        sidecar[owner_id] = parse_entities(record, path, line_no);
    });
    return sidecar;
}

void apply_entity_sidecar(std::vector<Query>& queries, const std::string& path) {
    auto sidecar = load_entity_sidecar(path);
    for (Query& query : queries) {
        auto it = sidecar.find(query.id);
        if (it != sidecar.end()) query.entities = it->second;
    }
}

}  // namespace evir
