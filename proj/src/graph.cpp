#include "kgrec/graph.hpp"

#include <algorithm>
#include <cmath>

#include "kgrec/error.hpp"

namespace kgrec {

KnowledgeGraph::KnowledgeGraph(std::vector<Triple> triples) {
    std::sort(triples.begin(), triples.end());
    triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
    triples_ = std::move(triples);

    std::vector<std::string> entity_names;
    std::vector<std::string> predicate_names;
    for (const Triple& t : triples_) {
        entity_names.push_back(t.subject);
        predicate_names.push_back(t.predicate);
        if (!t.is_data_property) {
            entity_names.push_back(t.object);
            ++entity_triple_count_;
        }
    }
    std::sort(entity_names.begin(), entity_names.end());
    entity_names.erase(std::unique(entity_names.begin(), entity_names.end()),
                       entity_names.end());
    std::sort(predicate_names.begin(), predicate_names.end());
    predicate_names.erase(
        std::unique(predicate_names.begin(), predicate_names.end()),
        predicate_names.end());
    entities_ = std::move(entity_names);
    predicates_ = std::move(predicate_names);

    entity_index_.reserve(entities_.size());
    for (std::uint32_t i = 0; i < entities_.size(); ++i)
        entity_index_.emplace(entities_[i], i);
    predicate_index_.reserve(predicates_.size());
    for (std::uint32_t i = 0; i < predicates_.size(); ++i)
        predicate_index_.emplace(predicates_[i], i);

    // Undirected adjacency: each entity-valued triple contributes a forward
    // and a reverse entry (one entry for self-loops).
    std::vector<std::size_t> degree(entities_.size() + 1, 0);
    for (const Triple& t : triples_) {
        if (t.is_data_property) continue;
        const std::uint32_t s = *entity_id(t.subject);
        const std::uint32_t o = *entity_id(t.object);
        ++degree[s + 1];
        if (o != s) ++degree[o + 1];
    }
    adjacency_offsets_.resize(entities_.size() + 1, 0);
    for (std::size_t i = 1; i < degree.size(); ++i)
        adjacency_offsets_[i] = adjacency_offsets_[i - 1] + degree[i];
    adjacency_.resize(adjacency_offsets_.back());

    std::vector<std::size_t> cursor(adjacency_offsets_.begin(),
                                    adjacency_offsets_.end() - 1);
    for (const Triple& t : triples_) {
        if (t.is_data_property) continue;
        const std::uint32_t s = *entity_id(t.subject);
        const std::uint32_t o = *entity_id(t.object);
        const std::uint32_t p = *predicate_id(t.predicate);
        adjacency_[cursor[s]++] = Edge{p, o};
        if (o != s) adjacency_[cursor[o]++] = Edge{p, s};
    }
    for (std::size_t e = 0; e < entities_.size(); ++e) {
        auto begin = adjacency_.begin() + adjacency_offsets_[e];
        auto end = adjacency_.begin() + adjacency_offsets_[e + 1];
        std::sort(begin, end, [](const Edge& a, const Edge& b) {
            return a.neighbor != b.neighbor ? a.neighbor < b.neighbor
                                            : a.predicate < b.predicate;
        });
    }
}

std::optional<std::uint32_t> KnowledgeGraph::entity_id(std::string_view name) const {
    const auto it = entity_index_.find(std::string(name));
    if (it == entity_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::uint32_t> KnowledgeGraph::predicate_id(std::string_view name) const {
    const auto it = predicate_index_.find(std::string(name));
    if (it == predicate_index_.end()) return std::nullopt;
    return it->second;
}

std::span<const Edge> KnowledgeGraph::neighbors(std::uint32_t entity) const {
    return {adjacency_.data() + adjacency_offsets_[entity],
            adjacency_offsets_[entity + 1] - adjacency_offsets_[entity]};
}

bool KnowledgeGraph::adjacent(std::uint32_t a, std::uint32_t b) const {
    const auto nbrs = neighbors(a);
    const auto it = std::lower_bound(
        nbrs.begin(), nbrs.end(), b,
        [](const Edge& e, std::uint32_t value) { return e.neighbor < value; });
    return it != nbrs.end() && it->neighbor == b;
}

bool KnowledgeGraph::contains(const Triple& triple) const {
    return std::binary_search(triples_.begin(), triples_.end(), triple);
}

KnowledgeGraph KnowledgeGraph::without_data_properties() const {
    std::vector<Triple> kept;
    kept.reserve(entity_triple_count_);
    for (const Triple& t : triples_)
        if (!t.is_data_property) kept.push_back(t);
    return KnowledgeGraph(std::move(kept));
}

GraphStats KnowledgeGraph::stats() const {
    GraphStats s;
    s.triples_total = triples_.size();
    s.triples_entity = entity_triple_count_;
    s.triples_literal = triples_.size() - entity_triple_count_;
    s.entity_count = entities_.size();
    s.predicate_count = predicates_.size();
    if (!entities_.empty()) {
        const double avg = static_cast<double>(entity_triple_count_) /
                           static_cast<double>(entities_.size());
        s.avg_relations_per_entity = std::round(avg * 100.0) / 100.0;
    }
    return s;
}

std::vector<std::string> KnowledgeGraph::text_pool() const {
    std::vector<std::string> pool;
    for (const Triple& t : triples_) {
        if (t.is_data_property) continue;
        if (t.object != "Text") continue;
        if (t.predicate == "isA" || t.predicate == "type" || t.predicate == "a")
            pool.push_back(t.subject);
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    return pool;
}

}  // namespace kgrec
