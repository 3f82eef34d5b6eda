#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "kgrec/graph.hpp"

namespace kgrec {

struct CorruptedTriple {
    Triple triple;
    bool corrupted_head = false;  // else the tail was replaced
    Triple source;
};

struct NegativeBatch {
    std::vector<CorruptedTriple> negatives;
    bool complete = true;
    std::string error;  // set when the retry budget ran out
};

struct NegativeOptions {
    std::size_t max_retries = 1000;
    // Restrict replacements to entities observed in the same
    // (predicate, side) slot instead of the full entity set.
    bool type_aware = false;
};

// Corrupts one side of each source triple (sources are cycled until count is
// reached) with a uniformly drawn replacement entity. Candidates found in
// kg's triple set, equal to an earlier output, or equal to their source are
// discarded and resampled. On retry exhaustion the partial batch is returned
// with complete=false and an error message.
NegativeBatch sample_negatives(const KnowledgeGraph& kg,
                               std::span<const Triple> sources,
                               std::size_t count, std::uint64_t seed,
                               const NegativeOptions& options = {});

// Triple TSV with a trailing "neg" column.
void write_negatives(std::ostream& out, const NegativeBatch& batch);

}  // namespace kgrec
