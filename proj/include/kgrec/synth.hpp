#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "kgrec/evaluation.hpp"
#include "kgrec/triple.hpp"

namespace kgrec {

struct CountRange {
    std::size_t lo = 1;
    std::size_t hi = 1;
};

// Synthetic corpus: texts partitioned into clusters; each cluster owns an
// attribute profile, and a text draws each attribute from its cluster
// profile with share_probability, otherwise from the global pool.
struct SynthSpec {
    std::size_t n_texts = 100;
    std::size_t n_genres = 24;
    std::size_t n_themes = 48;
    std::size_t n_subthemes = 60;
    std::size_t n_authors = 40;
    CountRange genres_per_text{1, 2};
    CountRange themes_per_text{3, 5};
    CountRange subthemes_per_text{2, 4};
    std::size_t clusters = 4;
    double share_probability = 0.9;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SynthResult {
    std::vector<Triple> triples;
    std::vector<RankingCase> ground_truth;  // one per text: cluster co-members
    std::vector<std::size_t> cluster_of;    // cluster id per text index
    std::vector<std::string> text_names;
};

SynthResult generate_synthetic_kg(const SynthSpec& spec);

void write_ground_truth(std::ostream& out, std::span<const RankingCase> cases);
void save_ground_truth(const std::string& path, std::span<const RankingCase> cases);

}  // namespace kgrec
