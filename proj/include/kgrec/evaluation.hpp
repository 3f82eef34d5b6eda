#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kgrec/graph.hpp"
#include "kgrec/negatives.hpp"
#include "kgrec/skipgram.hpp"

namespace kgrec {

struct EdgeSplit {
    std::vector<Triple> train;
    std::vector<Triple> validation;
    std::vector<Triple> test;
};

// Uniform random partition of the entity-valued triples. Train and
// validation sizes are rounded down; the remainder goes to test.
EdgeSplit split_edges(const KnowledgeGraph& kg,
                      const std::array<double, 3>& ratios, std::uint64_t seed);

enum class ScoreKind { cosine, dot };

ScoreKind parse_score_kind(std::string_view name);
const char* score_kind_name(ScoreKind kind);

// Similarity between head and tail vectors; the relation is not scored.
double score_triple(const EmbeddingTable& emb, const Triple& triple,
                    ScoreKind kind = ScoreKind::cosine);

// P(random positive scores above random negative), ties counted 0.5.
// Exact, via midrank statistics.
double auc(std::span<const double> positive_scores,
           std::span<const double> negative_scores);

struct RankingCase {
    std::string anchor;
    std::vector<std::string> ground_truth;  // sorted, unique, anchor excluded
};

// Ground-truth file: "anchor<TAB>comma-separated identifiers" per line.
std::vector<RankingCase> parse_ranking_cases(std::istream& in);
std::vector<RankingCase> load_ranking_cases(const std::string& path);

using Ranking = std::vector<std::string>;  // ranked candidates, anchor excluded

// Fraction of cases with at least one ground-truth member in the top k.
double hits_at_k(std::span<const RankingCase> cases,
                 std::span<const Ranking> rankings, std::size_t k);

// Mean reciprocal rank of the first ground-truth member (0 when absent).
double mrr(std::span<const RankingCase> cases, std::span<const Ranking> rankings);

// Mean DCG@k / IDCG@k with binary relevance; IDCG reorders the candidate
// list's relevances descending. Cases with zero gain contribute 0.
double ndcg_at_k(std::span<const RankingCase> cases,
                 std::span<const Ranking> rankings, std::size_t k);

struct EvalReport {
    std::map<std::string, double> metrics;  // AUC, Hits@{1,3,5,10}, MRR, nDCG@10

    // provenance
    std::string model;
    std::string dataset;
    std::string weight_config;
    std::uint64_t seed = 0;

    std::size_t skipped_test_triples = 0;  // vocabulary missing an endpoint
    std::size_t skipped_candidates = 0;    // pool entities missing a vector
    std::size_t cases_evaluated = 0;
    std::size_t cases_total = 0;

    std::string to_json_string(int indent = 2) const;

    // one row per report, for assembling result tables
    static std::string csv_header();
    std::string to_csv_row() const;
};

// Link-prediction AUC over (test positives vs. negatives) plus the ranking
// metrics over cases, with candidates drawn from pool \ {anchor}. Triples or
// cases that cannot be scored are skipped and tallied; skipped cases still
// count in the ranking denominators.
EvalReport evaluate(const EmbeddingTable& emb, const EdgeSplit& split,
                    const NegativeBatch& negatives,
                    std::span<const RankingCase> cases,
                    std::span<const std::string> candidate_pool,
                    ScoreKind kind = ScoreKind::cosine);

}  // namespace kgrec
