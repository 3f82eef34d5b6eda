#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "kgrec/evaluation.hpp"
#include "kgrec/skipgram.hpp"
#include "kgrec/tuner.hpp"
#include "kgrec/walker.hpp"

namespace kgrec {

// Link-prediction objective for hyperparameter search: per trial, walks the
// train graph with the sampled walk parameters, trains embeddings with the
// sampled dimension/window, and scores the validation positives against a
// fixed negative pool. Referenced objects must outlive the returned callable.
Objective make_validation_objective(const KnowledgeGraph& train_graph,
                                    const std::vector<Triple>& validation,
                                    const NegativeBatch& negatives,
                                    WalkStrategy strategy,
                                    const RelationWeights* weights,
                                    const TrainConfig& train_defaults,
                                    ScoreKind kind = ScoreKind::cosine);

enum class PipelineStrategy { uniform, biased, node2vec, hybrid };

PipelineStrategy parse_pipeline_strategy(std::string_view name);
const char* pipeline_strategy_name(PipelineStrategy strategy);

struct PipelineConfig {
    // inputs: exactly one of triples_path / records_path
    std::string triples_path;
    std::string records_path;
    std::string weights_path;  // required for biased and hybrid
    std::string truth_path;    // optional; enables ranking metrics
    std::string pool_path;     // optional; overrides isA-derived text pool
    std::string out_dir = "out";

    PipelineStrategy strategy = PipelineStrategy::uniform;
    WalkConfig walk;
    TrainConfig train;
    std::array<double, 3> split_ratios{0.8, 0.1, 0.1};
    double negative_ratio = 1.0;
    ScoreKind score = ScoreKind::cosine;
    std::size_t top_n = 10;
    std::uint64_t seed = 0;
    bool quiet = false;
    std::string dataset_label;

    void validate() const;
    static PipelineConfig from_json_file(const std::string& path);
};

struct PipelineResult {
    EvalReport report;
    std::map<std::string, std::string> artifacts;  // name -> written path
};

// Per-stage random streams derive from the global seed with these salts, so
// any stage re-run from its predecessor's file output reproduces the
// end-to-end result.
namespace stage_seed {
inline constexpr std::uint64_t split = 101;
inline constexpr std::uint64_t walk_primary = 102;
inline constexpr std::uint64_t walk_biased = 103;
inline constexpr std::uint64_t train_primary = 104;
inline constexpr std::uint64_t train_biased = 105;
inline constexpr std::uint64_t negatives = 106;
}  // namespace stage_seed

// ingest -> strip -> split -> walk -> train (-> concat) -> evaluate ->
// recommend. Artifacts are written to out_dir; a failed stage leaves its
// in-progress files with a ".partial" suffix and aborts with the stage name.
PipelineResult run_pipeline(const PipelineConfig& config);

struct CaseStudyConfig {
    std::string triples_path;
    std::string truth_path;
    std::string default_weights_path;
    std::string genre_weights_path;
    std::string anchor = "1984";
    std::size_t top_n = 10;
    std::uint64_t seed = 20;

    // fixture-scale settings shared by all six configurations
    std::size_t walk_length = 40;
    std::size_t num_walks = 25;
    std::size_t dimension = 64;
    std::size_t window = 8;
    std::size_t epochs = 10;
    double p = 1.0;
    double q = 4.0;
};

struct CaseConfigurationResult {
    std::string name;
    std::vector<std::pair<std::string, double>> top;
    std::size_t case_recall = 0;  // ground-truth members in the top list
};

struct CaseStudyReport {
    std::string anchor;
    std::vector<std::string> ground_truth;
    std::vector<CaseConfigurationResult> configurations;

    std::string to_json_string(int indent = 2) const;
    std::string to_table() const;
};

// Runs the six embedding configurations (uniform, node2vec, biased and
// hybrid under both weight files) on one fixture and reports each top-n
// with its ground-truth recall.
CaseStudyReport case_fixture_report(const CaseStudyConfig& config);

}  // namespace kgrec
