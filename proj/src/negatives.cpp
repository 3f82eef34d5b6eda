#include "kgrec/negatives.hpp"

#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "kgrec/error.hpp"
#include "kgrec/rng.hpp"

namespace kgrec {

namespace {

std::string triple_key(const Triple& t) {
    std::string key;
    key.reserve(t.subject.size() + t.predicate.size() + t.object.size() + 2);
    key += t.subject;
    key += '\t';
    key += t.predicate;
    key += '\t';
    key += t.object;
    return key;
}

// Entities observed in a given (predicate, side) slot anywhere in the graph.
std::vector<std::string> slot_pool(const KnowledgeGraph& kg,
                                   const std::string& predicate, bool head_slot) {
    std::vector<std::string> pool;
    for (const Triple& t : kg.triples()) {
        if (t.is_data_property || t.predicate != predicate) continue;
        pool.push_back(head_slot ? t.subject : t.object);
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    return pool;
}

}  // namespace

NegativeBatch sample_negatives(const KnowledgeGraph& kg,
                               std::span<const Triple> sources,
                               std::size_t count, std::uint64_t seed,
                               const NegativeOptions& options) {
    NegativeBatch batch;
    if (count == 0) return batch;
    if (sources.empty())
        throw ValidationError("sample_negatives: no source triples");
    if (kg.entity_count() < 2)
        throw ValidationError("sample_negatives: graph needs at least 2 entities");

    Rng rng(seed);
    std::unordered_set<std::string> emitted;
    emitted.reserve(count);

    // type-aware mode: replacements come from entities seen in the same slot
    std::unordered_map<std::string, std::vector<std::string>> head_pools;
    std::unordered_map<std::string, std::vector<std::string>> tail_pools;
    const auto pool_for = [&](const Triple& source, bool head) -> const std::vector<std::string>* {
        if (!options.type_aware) return nullptr;
        auto& pools = head ? head_pools : tail_pools;
        auto it = pools.find(source.predicate);
        if (it == pools.end())
            it = pools.emplace(source.predicate, slot_pool(kg, source.predicate, head))
                     .first;
        return &it->second;
    };

    batch.negatives.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const Triple& source = sources[i % sources.size()];
        bool found = false;
        for (std::size_t attempt = 0; attempt < options.max_retries; ++attempt) {
            const bool corrupt_head = rng.below(2) == 0;
            const auto* pool = pool_for(source, corrupt_head);
            const std::string& replacement =
                (pool && !pool->empty())
                    ? (*pool)[rng.below(pool->size())]
                    : kg.entities()[rng.below(kg.entity_count())];

            Triple candidate = source;
            (corrupt_head ? candidate.subject : candidate.object) = replacement;
            if (candidate == source) continue;
            if (kg.contains(candidate)) continue;
            const std::string key = triple_key(candidate);
            if (!emitted.insert(key).second) continue;

            batch.negatives.push_back({std::move(candidate), corrupt_head, source});
            found = true;
            break;
        }
        if (!found) {
            batch.complete = false;
            batch.error = "retry budget exhausted after " +
                          std::to_string(batch.negatives.size()) + " of " +
                          std::to_string(count) +
                          " negatives; the positive graph is near-complete for (" +
                          source.subject + ", " + source.predicate + ", " +
                          source.object + ")";
            break;
        }
    }
    return batch;
}

void write_negatives(std::ostream& out, const NegativeBatch& batch) {
    for (const CorruptedTriple& c : batch.negatives)
        out << c.triple.subject << '\t' << c.triple.predicate << '\t'
            << c.triple.object << "\tneg\n";
}

}  // namespace kgrec
