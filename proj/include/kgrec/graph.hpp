#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kgrec/triple.hpp"

namespace kgrec {

struct Edge {
    std::uint32_t predicate;
    std::uint32_t neighbor;
};

struct GraphStats {
    std::size_t triples_total = 0;
    std::size_t triples_entity = 0;   // object is an entity
    std::size_t triples_literal = 0;  // data properties
    std::size_t entity_count = 0;
    std::size_t predicate_count = 0;
    double avg_relations_per_entity = 0.0;  // entity triples / entities, 2 decimals
};

// Immutable triple store with an undirected adjacency index over
// entity-valued triples. Entity and predicate ids follow sorted name order,
// so the same triple set indexes identically regardless of input order.
// Safe for concurrent reads after construction.
class KnowledgeGraph {
public:
    KnowledgeGraph() = default;
    explicit KnowledgeGraph(std::vector<Triple> triples);

    const std::vector<Triple>& triples() const { return triples_; }
    const std::vector<std::string>& entities() const { return entities_; }
    const std::vector<std::string>& predicates() const { return predicates_; }

    std::size_t entity_count() const { return entities_.size(); }
    std::size_t entity_triple_count() const { return entity_triple_count_; }

    std::optional<std::uint32_t> entity_id(std::string_view name) const;
    const std::string& entity_name(std::uint32_t id) const { return entities_[id]; }
    std::optional<std::uint32_t> predicate_id(std::string_view name) const;
    const std::string& predicate_name(std::uint32_t id) const { return predicates_[id]; }

    // Adjacency entries of one entity, sorted by (neighbor, predicate).
    // Each entity-valued triple contributes an entry in both directions.
    std::span<const Edge> neighbors(std::uint32_t entity) const;
    bool adjacent(std::uint32_t a, std::uint32_t b) const;
    bool contains(const Triple& triple) const;

    KnowledgeGraph without_data_properties() const;
    GraphStats stats() const;

    // Entities asserted as texts via (e, isA|type|a, Text); sorted.
    std::vector<std::string> text_pool() const;

private:
    std::vector<Triple> triples_;  // sorted, deduplicated
    std::size_t entity_triple_count_ = 0;

    std::vector<std::string> entities_;    // sorted
    std::vector<std::string> predicates_;  // sorted
    std::unordered_map<std::string, std::uint32_t> entity_index_;
    std::unordered_map<std::string, std::uint32_t> predicate_index_;

    std::vector<std::size_t> adjacency_offsets_;  // CSR over entity ids
    std::vector<Edge> adjacency_;
};

}  // namespace kgrec
