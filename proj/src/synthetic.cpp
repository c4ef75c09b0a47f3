#include "evir/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include <json.hpp>

#include "evir/corpus.hpp"
#include "evir/errors.hpp"
#include "evir/vector_store.hpp"

namespace evir {

namespace {

// mt19937_64 is fully specified, and the derived draws below avoid
// std::*_distribution (whose algorithms vary by standard library), so one
// seed yields one byte stream everywhere this compiles the same libm.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::size_t below(std::size_t n) {
        // rejection sampling: unbiased and sequence-stable
        std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t draw;
        do {
            draw = engine_();
        } while (draw >= limit);
        return static_cast<std::size_t>(draw % n);
    }

    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
        double u2 = unit();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Filler vocabulary; deliberately disjoint from every name pool, marker
// token, and query-template word so planted terms keep document frequency 1.
constexpr const char* kFiller[] = {
    "storm",   "flood",    "summit",     "festival", "parade",   "bridge",  "harbor",   "market",
    "tunnel",  "quarry",   "orchard",    "museum",   "derby",    "auction", "regatta",  "drought",
    "blackout", "merger",  "strike",     "verdict",  "launch",   "eclipse", "pageant",  "salvage",
    "harvest", "census",   "relay",      "armistice", "exhibit", "ferry",   "landslide", "lottery",
    "marathon", "monsoon", "opera",      "waterway", "quake",    "ransom",  "referendum", "rescue",
    "siege",   "tariff",   "telescope",  "tournament", "treaty", "vaccine", "wildfire", "workshop",
};
constexpr std::size_t kFillerCount = sizeof(kFiller) / sizeof(kFiller[0]);

// Connectives for article text; none of these appear in query templates.
constexpr const char* kGlue[] = {"the", "a", "was", "in", "at", "of", "and", "to", "on", "that"};
constexpr std::size_t kGlueCount = sizeof(kGlue) / sizeof(kGlue[0]);

constexpr const char* kFirstNames[] = {"mara",  "odin",  "petra",  "silas", "nadia", "tomas", "ingrid",
                                       "casper", "lena",  "viktor", "freya", "anton", "salome", "bruno",
                                       "ilka",  "marek", "dagny",  "emeric", "talia", "johan"};
constexpr const char* kLastNames[] = {"quint",  "harlow",  "voss",     "lindqvist", "abara",    "castellan",
                                      "drees",  "ferro",   "galvan",   "holt",      "ivanov",   "joubert",
                                      "krantz", "larkspur", "mendel",  "norgaard",  "oberlin",  "pasternak",
                                      "reiner", "solano"};
constexpr std::size_t kFirstCount = sizeof(kFirstNames) / sizeof(kFirstNames[0]);
constexpr std::size_t kLastCount = sizeof(kLastNames) / sizeof(kLastNames[0]);

// Background people for distractor articles; never referenced by queries.
constexpr const char* kCelebrities[] = {"teodor alvesk", "yusuf brandt",  "amara calloway", "kenji duarte",
                                        "zofia eriksen", "ravi fontaine", "noor grady",     "stellan hollis",
                                        "amara brandt",  "kenji alvesk",  "zofia fontaine", "teodor grady"};
constexpr std::size_t kCelebrityCount = sizeof(kCelebrities) / sizeof(kCelebrities[0]);

// Background places; single-token, never referenced by queries.
constexpr const char* kPlaces[] = {"karvos",  "tellin",    "moraby",  "westvale", "quorrin",
                                   "ashfeld", "dunhollow", "serenno", "valtara",  "ombrek"};
constexpr std::size_t kPlaceCount = sizeof(kPlaces) / sizeof(kPlaces[0]);

// Adversarial-mode query places, combined as direction + stem.
constexpr const char* kGpeDirections[] = {"north", "south", "east", "west", "new",
                                          "old",   "port",  "fort", "lake", "mount"};
constexpr const char* kGpeStems[] = {"arvin",  "belmar", "corvale", "dunmore",
                                     "elsted", "farrow", "gilwick", "hartsel"};
constexpr std::size_t kGpeDirectionCount = sizeof(kGpeDirections) / sizeof(kGpeDirections[0]);
constexpr std::size_t kGpeStemCount = sizeof(kGpeStems) / sizeof(kGpeStems[0]);

constexpr const char* kStopwords[] = {"a",    "an",   "and",  "are", "as",   "at",   "be",   "but", "by",
                                      "for",  "if",   "in",   "into", "is",  "it",   "no",   "not", "of",
                                      "on",   "or",   "such", "that", "the", "their", "then", "there",
                                      "these", "they", "this", "to",  "was", "will", "with"};

std::string pad_number(const char* prefix, std::size_t value, int width) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%s%0*zu", prefix, width, value);
    return buffer;
}

std::string article_id(std::size_t index) { return pad_number("a", index, 4); }
std::string image_id(std::size_t index) { return pad_number("img", index, 5); }
std::string query_id(std::size_t index) { return pad_number("q", index, 4); }
std::string marker_token(std::size_t index) { return pad_number("ev", index, 4); }

std::string person_name(std::size_t index) {
    return std::string(kFirstNames[index % kFirstCount]) + " " + kLastNames[(index / kFirstCount) % kLastCount];
}

std::string adversarial_place(std::size_t index) {
    return std::string(kGpeDirections[index % kGpeDirectionCount]) + " " +
           kGpeStems[(index / kGpeDirectionCount) % kGpeStemCount];
}

// "mara quint" -> "Mara Quint"
std::string display(const std::string& canonical) {
    std::string out = canonical;
    bool start = true;
    for (char& c : out) {
        if (start && c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
        start = c == ' ';
    }
    return out;
}

std::string sentence(Rng& rng, std::size_t min_words, std::size_t max_words) {
    std::size_t words = min_words + rng.below(max_words - min_words + 1);
    std::string out;
    for (std::size_t i = 0; i < words; ++i) {
        const char* word = rng.unit() < 0.3 ? kGlue[rng.below(kGlueCount)] : kFiller[rng.below(kFillerCount)];
        if (!out.empty()) out += ' ';
        out += word;
    }
    out += '.';
    out[0] = static_cast<char>(out[0] - 'a' + 'A');
    return out;
}

double cosine(const std::vector<float>& a, const std::vector<float>& b) {
    return dot(a, b) / std::sqrt(dot(a, a) * dot(b, b));
}

std::vector<float> separated_vector(Rng& rng, std::uint32_t dim, const std::vector<std::vector<float>>& anchors,
                                    double margin) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<float> vec(dim);
        for (float& component : vec) component = static_cast<float>(rng.gaussian());
        bool separated = true;
        for (const std::vector<float>& anchor : anchors) {
            if (std::abs(cosine(vec, anchor)) > margin) {
                separated = false;
                break;
            }
        }
        if (separated) return vec;
    }
    throw InternalError("could not separate embeddings; raise embedding_dim or lower n_queries");
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError(DataErrorKind::MissingFile, "cannot write " + path.string());
    return out;
}

}  // namespace

SyntheticPaths generate_synthetic(const SyntheticSpec& spec, const std::string& out_dir) {
    if (spec.n_queries < 1) throw UsageError("n_queries must be at least 1");
    if (spec.n_articles < 2 * spec.n_queries) throw UsageError("n_articles must be at least 2 * n_queries");
    if (spec.n_articles > 9999) throw UsageError("n_articles must be at most 9999");
    if (spec.embedding_dim < 8) throw UsageError("embedding_dim must be at least 8");
    if (spec.n_queries > kFirstCount * kLastCount) throw UsageError("n_queries must be at most 400");
    if (spec.adversarial && spec.n_queries > kGpeDirectionCount * kGpeStemCount) {
        throw UsageError("adversarial mode supports at most 80 queries");
    }

    std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    Rng rng(spec.seed);

    // Article index 2i+1 is planted for query i; 2i is its paired distractor
    // (adversarial) or a plain filler article. Each article owns two images,
    // and the planted article's first image is the ground-truth answer.
    std::vector<Article> articles;
    articles.reserve(spec.n_articles);
    for (std::size_t a = 0; a < spec.n_articles; ++a) {
        Article article;
        article.id = article_id(a);
        article.image_ids = {image_id(2 * a), image_id(2 * a + 1)};

        bool planted = a % 2 == 1 && a / 2 < spec.n_queries;
        bool distractor = spec.adversarial && a % 2 == 0 && a / 2 < spec.n_queries;
        if (planted) {
            std::size_t q = a / 2;
            std::string person = display(person_name(q));
            article.title = person + " at the " + kFiller[rng.below(kFillerCount)] + " " +
                            kFiller[rng.below(kFillerCount)];
            article.body = sentence(rng, 6, 12) + " " + person + " announced the " +
                           kFiller[rng.below(kFillerCount)] + " at the " + marker_token(q) + " gathering. " +
                           sentence(rng, 6, 12);
        } else {
            article.title = sentence(rng, 3, 5);
            article.title.pop_back();  // titles carry no final period
            std::string celebrity = display(kCelebrities[rng.below(kCelebrityCount)]);
            std::string place = display(kPlaces[rng.below(kPlaceCount)]);
            article.body = sentence(rng, 6, 12) + " " + celebrity + " reached " + place + " and " + "the " +
                           kFiller[rng.below(kFillerCount)] + " gathered. " + sentence(rng, 6, 12);
            if (distractor) {
                std::size_t q = a / 2;
                article.body += " The " + std::string(kFiller[rng.below(kFillerCount)]) + " reached " +
                                display(adversarial_place(q)) + " overnight.";
            }
        }
        articles.push_back(std::move(article));
    }

    std::vector<ImageRecord> images;
    images.reserve(spec.n_articles * 2);
    for (std::size_t a = 0; a < spec.n_articles; ++a) {
        for (std::size_t slot = 0; slot < 2; ++slot) {
            ImageRecord image;
            image.id = image_id(2 * a + slot);
            image.article_ids = {article_id(a)};
            // some filler images illustrate two articles
            if (slot == 1 && a >= 2 * spec.n_queries && a % 7 == 3) {
                image.article_ids.push_back(article_id(a - 1));
            }
            image.caption = sentence(rng, 4, 8);
            images.push_back(std::move(image));
        }
    }

    Corpus corpus = Corpus::from_records(std::move(articles), std::move(images));
    SyntheticPaths paths;
    paths.articles = (dir / "articles.jsonl").string();
    paths.images = (dir / "images.jsonl").string();
    corpus.save(paths.articles, paths.images);

    // Queries and ground truth.
    paths.queries = (dir / "queries.jsonl").string();
    paths.ground_truth = (dir / "ground_truth.jsonl").string();
    {
        std::ofstream queries_out = open_out(paths.queries);
        std::ofstream truth_out = open_out(paths.ground_truth);
        for (std::size_t q = 0; q < spec.n_queries; ++q) {
            std::string person = display(person_name(q));
            std::string marker = marker_token(q);
            std::string text;
            switch (q % 3) {
                case 0: text = "Where did " + person + " appear at " + marker; break;
                case 1: text = "When did " + person + " speak near " + marker; break;
                default: text = "Show me " + person + " and the " + marker + " moment"; break;
            }
            nlohmann::json entities = nlohmann::json::array();
            entities.push_back({{"text", person}, {"type", "PERSON"}});
            if (spec.adversarial) {
                std::string place = display(adversarial_place(q));
                text += " in " + place;
                entities.push_back({{"text", place}, {"type", "GPE"}});
            }
            text += q % 3 == 2 ? "." : "?";

            nlohmann::json record;
            record["id"] = query_id(q);
            record["text"] = text;
            record["entities"] = std::move(entities);
            queries_out << record.dump() << '\n';

            nlohmann::json truth;
            truth["query_id"] = query_id(q);
            truth["image_ids"] = {image_id(2 * (2 * q + 1))};
            truth_out << truth.dump() << '\n';
        }
    }

    // Embeddings: the planted image vector is the query vector, bit for bit;
    // every other vector keeps |cosine| <= 0.6 to all planted vectors, so the
    // planted image wins the rerank by a wide margin in both slots.
    const char* slot_names[2] = {"a", "b"};
    const char* slot_tags[2] = {"synthetic-event-aligned-v1", "synthetic-contrastive-v1"};
    for (std::size_t slot = 0; slot < 2; ++slot) {
        std::vector<std::vector<float>> planted;
        planted.reserve(spec.n_queries);
        for (std::size_t q = 0; q < spec.n_queries; ++q) {
            planted.push_back(separated_vector(rng, spec.embedding_dim, planted, 0.6));
        }

        std::vector<std::pair<std::string, std::vector<float>>> image_rows;
        image_rows.reserve(spec.n_articles * 2);
        for (std::size_t j = 0; j < spec.n_articles * 2; ++j) {
            bool is_planted_image = j % 4 == 2 && j / 4 < spec.n_queries;  // j == 2 * (2q + 1)
            std::vector<float> vec = is_planted_image ? planted[j / 4]
                                                      : separated_vector(rng, spec.embedding_dim, planted, 0.6);
            image_rows.emplace_back(image_id(j), std::move(vec));
        }
        EmbeddingMatrix::from_rows(slot_tags[slot], spec.embedding_dim, std::move(image_rows))
            .save((dir / ("embeddings_" + std::string(slot_names[slot]) + ".evec")).string());

        std::vector<std::pair<std::string, std::vector<float>>> query_rows;
        query_rows.reserve(spec.n_queries);
        for (std::size_t q = 0; q < spec.n_queries; ++q) query_rows.emplace_back(query_id(q), planted[q]);
        EmbeddingMatrix::from_rows(slot_tags[slot], spec.embedding_dim, std::move(query_rows))
            .save((dir / ("queries_" + std::string(slot_names[slot]) + ".evec")).string());
    }

    {
        std::ofstream out = open_out(dir / "gazetteer.tsv");
        for (std::size_t q = 0; q < spec.n_queries; ++q) out << person_name(q) << "\tPERSON\n";
        if (spec.adversarial) {
            for (std::size_t q = 0; q < spec.n_queries; ++q) out << adversarial_place(q) << "\tGPE\n";
        }
        for (const char* celebrity : kCelebrities) out << celebrity << "\tPERSON\n";
        for (const char* place : kPlaces) out << place << "\tGPE\n";
    }
    {
        std::ofstream out = open_out(dir / "synonyms.tsv");
        out << "teodor alvesk\tt alvesk\n";
        out << "yusuf brandt\tyusuf b brandt,brandt\n";
    }
    {
        std::ofstream out = open_out(dir / "stopwords.txt");
        out << "# english stopwords\n";
        for (const char* word : kStopwords) out << word << '\n';
    }

    paths.config = (dir / "config.json").string();
    {
        nlohmann::json config;
        config["corpus"] = {{"articles", "articles.jsonl"}, {"images", "images.jsonl"}, {"index", "index.eidx"}};
        config["analysis"] = {{"stopwords", "stopwords.txt"}, {"stem", false}};
        config["bm25"] = {{"k1", 1.2}, {"b", 0.75}};
        config["entities"] = {{"gazetteer", "gazetteer.tsv"}, {"synonyms", "synonyms.tsv"}};
        config["fusion"] = {{"rrf_k", 60}, {"top_k_articles", 30}, {"top_n_images", 10}};
        for (const char* slot : {"a", "b"}) {
            config[std::string("slot_") + slot] = {
                {"image_embeddings", std::string("embeddings_") + slot + ".evec"},
                {"query_embeddings", std::string("queries_") + slot + ".evec"},
                {"boost", {{"alpha", 10.0}, {"beta", 0.5}, {"gamma", 0.2}}},
            };
        }
        std::ofstream out = open_out(paths.config);
        out << config.dump(2) << '\n';
    }
    return paths;
}

}  // namespace evir
