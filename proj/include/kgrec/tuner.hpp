#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace kgrec {

// Discrete per-hyperparameter domains. Values are stored as doubles;
// integer-valued parameters are exact.
struct SearchSpace {
    std::map<std::string, std::vector<double>> domains;

    // walk_length {40,60,80,100}, num_walks {10,20,25,40,50},
    // dimension {128,256,512,1024}, window {20,25,30};
    // node2vec adds p {0.25,0.5,1,2} and q {1,2,4}.
    static SearchSpace default_envelope(bool include_node2vec);

    // JSON object mapping hyperparameter name -> list of allowed values.
    static SearchSpace from_json_file(const std::string& path);

    void validate() const;
};

using TrialConfig = std::map<std::string, double>;

struct TrialResult {
    std::size_t index = 0;
    TrialConfig config;
    double auc = 0.0;
    bool ok = false;
    std::string error;
    double wall_seconds = 0.0;
    std::uint64_t seed = 0;
};

struct SearchResult {
    TrialConfig best_config;
    double best_auc = 0.0;
    std::size_t best_index = 0;
    std::vector<TrialResult> trials;
};

// objective(config, trial_seed) -> validation AUC; trial seeds derive from
// (seed, trial index).
using Objective = std::function<double(const TrialConfig&, std::uint64_t)>;

// Uniform random search. Repeated configs reuse the first evaluation;
// objective exceptions mark the trial failed and the search continues. Best
// is the highest AUC, ties broken by earliest trial.
SearchResult random_search(const SearchSpace& space, std::size_t trials,
                           const Objective& objective, std::uint64_t seed);

// Trial log: one JSON object per line.
std::string trial_log_json(const std::vector<TrialResult>& trials);
std::string trial_config_json(const TrialConfig& config);

}  // namespace kgrec
