#include "kgrec/tuner.hpp"

#include <chrono>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "kgrec/error.hpp"
#include "kgrec/rng.hpp"

namespace kgrec {

SearchSpace SearchSpace::default_envelope(bool include_node2vec) {
    SearchSpace space;
    space.domains["walk_length"] = {40, 60, 80, 100};
    space.domains["num_walks"] = {10, 20, 25, 40, 50};
    space.domains["dimension"] = {128, 256, 512, 1024};
    space.domains["window"] = {20, 25, 30};
    if (include_node2vec) {
        space.domains["p"] = {0.25, 0.5, 1, 2};
        space.domains["q"] = {1, 2, 4};
    }
    return space;
}

SearchSpace SearchSpace::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open search-space file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("bad search-space JSON: " + std::string(e.what()));
    }
    SearchSpace space;
    for (const auto& [name, values] : j.items()) {
        if (!values.is_array())
            throw ValidationError("search-space entry '" + name +
                                  "' must be a list of values");
        for (const auto& v : values)
            space.domains[name].push_back(v.get<double>());
    }
    space.validate();
    return space;
}

void SearchSpace::validate() const {
    if (domains.empty()) throw ValidationError("search space has no parameters");
    for (const auto& [name, values] : domains)
        if (values.empty())
            throw ValidationError("search-space parameter '" + name +
                                  "' has no values");
}

namespace {

std::string config_key(const TrialConfig& config) {
    std::ostringstream key;
    for (const auto& [name, value] : config) key << name << '=' << value << ';';
    return key.str();
}

}  // namespace

SearchResult random_search(const SearchSpace& space, std::size_t trials,
                           const Objective& objective, std::uint64_t seed) {
    if (trials < 1) throw ValidationError("random_search: trials must be >= 1");
    space.validate();

    Rng rng(seed);
    std::map<std::string, double> cache;  // config key -> AUC of first evaluation
    std::map<std::string, std::string> failed;

    SearchResult result;
    result.trials.reserve(trials);
    bool have_best = false;

    for (std::size_t i = 0; i < trials; ++i) {
        TrialResult trial;
        trial.index = i;
        trial.seed = derive_stream(seed, i);
        for (const auto& [name, values] : space.domains)
            trial.config[name] = values[rng.below(values.size())];

        const std::string key = config_key(trial.config);
        const auto started = std::chrono::steady_clock::now();
        if (const auto hit = cache.find(key); hit != cache.end()) {
            trial.auc = hit->second;
            trial.ok = true;
        } else if (const auto miss = failed.find(key); miss != failed.end()) {
            trial.error = miss->second;
        } else {
            try {
                trial.auc = objective(trial.config, trial.seed);
                trial.ok = true;
                cache.emplace(key, trial.auc);
            } catch (const std::exception& e) {
                trial.error = e.what();
                failed.emplace(key, trial.error);
            }
        }
        trial.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                .count();

        if (trial.ok && (!have_best || trial.auc > result.best_auc)) {
            result.best_auc = trial.auc;
            result.best_config = trial.config;
            result.best_index = i;
            have_best = true;
        }
        result.trials.push_back(std::move(trial));
    }
    if (!have_best) throw RuntimeError("random_search: every trial failed");
    return result;
}

std::string trial_config_json(const TrialConfig& config) {
    nlohmann::ordered_json j;
    for (const auto& [name, value] : config) {
        if (value == static_cast<double>(static_cast<long long>(value)))
            j[name] = static_cast<long long>(value);
        else
            j[name] = value;
    }
    return j.dump();
}

std::string trial_log_json(const std::vector<TrialResult>& trials) {
    std::ostringstream out;
    for (const TrialResult& t : trials) {
        nlohmann::ordered_json j;
        j["trial"] = t.index;
        j["config"] = nlohmann::ordered_json::parse(trial_config_json(t.config));
        j["status"] = t.ok ? "ok" : "failed";
        if (t.ok)
            j["auc"] = t.auc;
        else
            j["error"] = t.error;
        j["seed"] = t.seed;
        j["wall_seconds"] = t.wall_seconds;
        out << j.dump() << '\n';
    }
    return out.str();
}

}  // namespace kgrec
