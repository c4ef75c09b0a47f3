#include "evir/entities.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <utility>

#include "evir/analysis.hpp"
#include "evir/errors.hpp"

namespace evir {

std::string_view to_label(EntityType type) {
    switch (type) {
        case EntityType::Person: return "PERSON";
        case EntityType::Org: return "ORG";
        case EntityType::Gpe: return "GPE";
        case EntityType::Cardinal: return "CARDINAL";
        case EntityType::Date: return "DATE";
        case EntityType::Time: return "TIME";
        case EntityType::Loc: return "LOC";
        case EntityType::Event: return "EVENT";
        case EntityType::Norp: return "NORP";
        case EntityType::Fac: return "FAC";
        case EntityType::Other: return "OTHER";
    }
    return "OTHER";
}

EntityType entity_type_from_label(std::string_view label) {
    if (label == "PERSON") return EntityType::Person;
    if (label == "ORG") return EntityType::Org;
    if (label == "GPE") return EntityType::Gpe;
    if (label == "CARDINAL") return EntityType::Cardinal;
    if (label == "DATE") return EntityType::Date;
    if (label == "TIME") return EntityType::Time;
    if (label == "LOC") return EntityType::Loc;
    if (label == "EVENT") return EntityType::Event;
    if (label == "NORP") return EntityType::Norp;
    if (label == "FAC") return EntityType::Fac;
    return EntityType::Other;
}

Entity make_entity(std::string text, EntityType type) {
    if (text.empty()) throw InternalError("entity text must be non-empty");
    Entity entity;
    entity.canonical = canonicalize(text);
    entity.text = std::move(text);
    entity.type = type;
    return entity;
}

void EntityWeightTable::set(EntityType type, double weight) {
    if (!(weight > 0.0)) throw InternalError("entity type weight must be positive");
    weights_[static_cast<std::size_t>(type)] = weight;
}

void EntityWeightTable::scale(double factor) {
    if (!(factor > 0.0)) throw InternalError("weight scale factor must be positive");
    for (double& w : weights_) w *= factor;
}

EntityWeightTable default_weight_table() {
    EntityWeightTable table;
    table.set(EntityType::Person, 4.3);
    table.set(EntityType::Org, 3.8);
    table.set(EntityType::Cardinal, 3.5);
    table.set(EntityType::Gpe, 3.1);
    return table;
}

SynonymTable SynonymTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(DataErrorKind::MissingFile, "cannot open synonym file " + path);
    SynonymTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw DataError(DataErrorKind::MalformedRecord,
                            path + ":" + std::to_string(line_no) + ": expected `form<TAB>alt1,alt2,...`");
        }
        std::string form = line.substr(0, tab);
        std::string rest = line.substr(tab + 1);
        std::size_t start = 0;
        while (start <= rest.size()) {
            auto comma = rest.find(',', start);
            std::string alt = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            if (!canonicalize(alt).empty()) table.add(form, alt);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }
    return table;
}

void SynonymTable::add(std::string_view form, std::string_view alternative) {
    std::string key = canonicalize(form);
    std::string alt = canonicalize(alternative);
    if (key.empty() || alt.empty()) throw InternalError("synonym forms must be non-empty");
    if (key == alt) return;  // no form maps to itself
    auto& alts = alternatives_[key];
    if (std::find(alts.begin(), alts.end(), alt) == alts.end()) alts.push_back(alt);
}

const std::vector<std::string>* SynonymTable::find(const std::string& canonical) const {
    auto it = alternatives_.find(canonical);
    return it == alternatives_.end() ? nullptr : &it->second;
}

std::vector<Entity> expand_entities(const std::vector<Entity>& entities, const SynonymTable& table) {
    std::vector<Entity> out;
    std::set<std::pair<std::string, EntityType>> seen;
    // Input entities first, so a synonym never displaces an original.
    for (const Entity& entity : entities) seen.emplace(entity.canonical, entity.type);
    std::set<std::pair<std::string, EntityType>> emitted;
    for (const Entity& entity : entities) {
        if (emitted.emplace(entity.canonical, entity.type).second) out.push_back(entity);
        const auto* alts = table.find(entity.canonical);
        if (!alts) continue;
        for (const std::string& alt : *alts) {
            auto key = std::make_pair(alt, entity.type);
            if (seen.contains(key) && !emitted.contains(key)) continue;  // appears later as an input
            if (emitted.insert(key).second) out.push_back(make_entity(alt, entity.type));
        }
    }
    return out;
}

Gazetteer Gazetteer::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(DataErrorKind::MissingFile, "cannot open gazetteer file " + path);
    Gazetteer gazetteer;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || canonicalize(line.substr(0, tab)).empty()) {
            throw DataError(DataErrorKind::MalformedRecord,
                            path + ":" + std::to_string(line_no) + ": expected `surface<TAB>TYPE`");
        }
        gazetteer.add(line.substr(0, tab), entity_type_from_label(line.substr(tab + 1)));
    }
    return gazetteer;
}

void Gazetteer::add(std::string_view surface, EntityType type) {
    std::string canonical = canonicalize(surface);
    if (canonical.empty()) throw InternalError("gazetteer surface must be non-empty");
    std::vector<std::string> tokens = tokenize(canonical, {});
    if (tokens.empty()) throw InternalError("gazetteer surface has no word characters: " + canonical);

    auto& entries = by_first_token_[tokens.front()];
    for (Entry& entry : entries) {
        if (entry.canonical == canonical) {
            entry.type = type;  // last addition wins
            return;
        }
    }
    entries.push_back(Entry{std::move(tokens), std::move(canonical), type});
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.tokens.size() != b.tokens.size()) return a.tokens.size() > b.tokens.size();
        return a.canonical < b.canonical;
    });
    ++size_;
}

std::vector<Entity> Gazetteer::extract(std::string_view text) const {
    std::vector<std::string> tokens = tokenize(text, {});
    std::vector<Entity> out;
    std::set<std::pair<std::string, EntityType>> seen;

    std::size_t i = 0;
    while (i < tokens.size()) {
        const Entry* match = nullptr;
        auto it = by_first_token_.find(tokens[i]);
        if (it != by_first_token_.end()) {
            for (const Entry& entry : it->second) {
                if (entry.tokens.size() > tokens.size() - i) continue;
                if (std::equal(entry.tokens.begin(), entry.tokens.end(), tokens.begin() + i)) {
                    match = &entry;  // entries are ordered longest first
                    break;
                }
            }
        }
        if (match) {
            if (seen.emplace(match->canonical, match->type).second) {
                out.push_back(make_entity(match->canonical, match->type));
            }
            i += match->tokens.size();
        } else {
            ++i;
        }
    }
    return out;
}

}  // namespace evir
