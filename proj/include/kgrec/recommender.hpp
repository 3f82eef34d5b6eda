#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kgrec/evaluation.hpp"
#include "kgrec/skipgram.hpp"

namespace kgrec {

// cos(theta) = a.b / (|a||b|), in [-1, 1]. Zero vectors are rejected.
double cosine(std::span<const double> a, std::span<const double> b);

struct Recommendation {
    std::string anchor;
    std::vector<std::pair<std::string, double>> items;  // scores non-increasing
    std::size_t requested = 0;
};

// Ranks pool \ {anchor} by similarity to the anchor, descending, ties broken
// by ascending identifier. Pool members without a vector are skipped.
Recommendation recommend(const EmbeddingTable& emb, const std::string& anchor,
                         std::size_t n, std::span<const std::string> pool,
                         ScoreKind kind = ScoreKind::cosine);

// "rank<TAB>identifier<TAB>score" with 6-decimal scores.
void write_recommendation(std::ostream& out, const Recommendation& rec);

}  // namespace kgrec
