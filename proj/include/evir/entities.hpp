#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace evir {

enum class EntityType : std::uint8_t {
    Person,
    Org,
    Gpe,
    Cardinal,
    Date,
    Time,
    Loc,
    Event,
    Norp,
    Fac,
    Other,
};

inline constexpr std::size_t kEntityTypeCount = 11;

std::string_view to_label(EntityType type);

// Unknown labels map to Other so sidecars produced by any NER tool load.
EntityType entity_type_from_label(std::string_view label);

struct Entity {
    std::string text;
    EntityType type = EntityType::Other;
    std::string canonical;  // lowercase(trim(text))

    bool operator==(const Entity&) const = default;
};

Entity make_entity(std::string text, EntityType type);

class EntityWeightTable {
public:
    EntityWeightTable() { weights_.fill(1.0); }

    double get(EntityType type) const { return weights_[static_cast<std::size_t>(type)]; }
    void set(EntityType type, double weight);
    void scale(double factor);

private:
    std::array<double, kEntityTypeCount> weights_;
};

// PERSON 4.3, ORG 3.8, CARDINAL 3.5, GPE 3.1; every other type 1.0.
EntityWeightTable default_weight_table();

// Directed expansion table: canonical form -> alternative canonical forms.
class SynonymTable {
public:
    // File format: one record per line, `form<TAB>alt1,alt2,...`.
    static SynonymTable load(const std::string& path);

    void add(std::string_view form, std::string_view alternative);
    const std::vector<std::string>* find(const std::string& canonical) const;
    std::size_t size() const { return alternatives_.size(); }

private:
    std::map<std::string, std::vector<std::string>> alternatives_;
};

// Every input entity followed by its synonym variants (same type), in input
// order, deduplicated on (canonical, type).
std::vector<Entity> expand_entities(const std::vector<Entity>& entities, const SynonymTable& table);

// Dictionary of known surface forms, the lightweight stand-in for a
// statistical NER model. Matching is token-based and leftmost-longest.
class Gazetteer {
public:
    // File format: one record per line, `surface<TAB>TYPE`, UTF-8.
    static Gazetteer load(const std::string& path);

    // Later additions of the same surface override the earlier type.
    void add(std::string_view surface, EntityType type);
    std::size_t size() const { return size_; }

    std::vector<Entity> extract(std::string_view text) const;

private:
    struct Entry {
        std::vector<std::string> tokens;
        std::string canonical;
        EntityType type;
    };

    // first token -> entries sorted by (token count desc, canonical asc)
    std::map<std::string, std::vector<Entry>> by_first_token_;
    std::size_t size_ = 0;
};

}  // namespace evir
