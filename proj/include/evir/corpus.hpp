#pragma once

#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "evir/entities.hpp"

namespace evir {

struct Article {
    std::string id;
    std::string title;
    std::string body;
    std::vector<std::string> image_ids;
    std::vector<Entity> entities;

    bool operator==(const Article&) const = default;
};

struct ImageRecord {
    std::string id;
    std::vector<std::string> article_ids;
    std::string caption;

    bool operator==(const ImageRecord&) const = default;
};

struct Query {
    std::string id;
    std::string text;
    std::vector<Entity> entities;
};

// query_id -> relevant image ids
using TruthMap = std::map<std::string, std::set<std::string>>;

// Immutable after load; articles and images are kept sorted by id, so the
// position of an article doubles as its dense document number.
class Corpus {
public:
    // Both files are JSON Lines. Fails with a distinct error category on a
    // malformed line (reporting the line number), a duplicate id, or an image
    // referencing a nonexistent article.
    static Corpus load(const std::string& articles_path, const std::string& images_path);
    static Corpus from_records(std::vector<Article> articles, std::vector<ImageRecord> images);

    void save(const std::string& articles_path, const std::string& images_path) const;

    const std::vector<Article>& articles() const { return articles_; }
    const std::vector<ImageRecord>& images() const { return images_; }

    const Article* find_article(const std::string& id) const;
    const ImageRecord* find_image(const std::string& id) const;

    // Images linked to the article via ImageRecord.article_ids, ascending.
    const std::vector<std::string>& images_of_article(const std::string& article_id) const;

    // Replaces the entity lists of matching articles; other owner ids are
    // ignored (they may address queries).
    void apply_entity_sidecar(const std::string& path);

    // Runs the gazetteer over title + body for articles that have no
    // entities yet; embedded or sidecar entities always win.
    void populate_entities(const Gazetteer& gazetteer);

    bool operator==(const Corpus&) const;

private:
    void rebuild_lookups();

    std::vector<Article> articles_;    // sorted by id
    std::vector<ImageRecord> images_;  // sorted by id
    std::unordered_map<std::string, std::size_t> article_index_;
    std::unordered_map<std::string, std::size_t> image_index_;
    std::unordered_map<std::string, std::vector<std::string>> article_images_;
};

std::vector<Query> load_queries(const std::string& path);

TruthMap load_ground_truth(const std::string& path);

// Sidecar file: one record per line with `owner_id` and `entities`.
std::map<std::string, std::vector<Entity>> load_entity_sidecar(const std::string& path);

// Replaces the entity lists of matching queries; other owner ids are ignored.
void apply_entity_sidecar(std::vector<Query>& queries, const std::string& path);

}  // namespace evir
