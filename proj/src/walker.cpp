#include "kgrec/walker.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "kgrec/error.hpp"

namespace kgrec {

RelationWeights::RelationWeights(std::map<std::string, double> weights)
    : weights_(std::move(weights)) {
    if (weights_.empty())
        throw ValidationError("relation weights: no predicates given");
    default_weight_ = weights_.begin()->second;
    for (const auto& [predicate, weight] : weights_) {
        if (weight <= 0.0)
            throw ValidationError("relation weights: non-positive weight for '" +
                                  predicate + "'");
        default_weight_ = std::min(default_weight_, weight);
    }
}

RelationWeights RelationWeights::parse(std::istream& in) {
    std::map<std::string, double> weights;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
            throw ParseError("expected 'predicate<TAB>weight'", line_no);
        const std::string predicate = line.substr(0, tab);
        double weight = 0.0;
        try {
            weight = std::stod(line.substr(tab + 1));
        } catch (const std::exception&) {
            throw ParseError("bad weight value", line_no);
        }
        if (weight <= 0.0) throw ParseError("weight must be positive", line_no);
        weights[predicate] = weight;
    }
    return RelationWeights(std::move(weights));
}

RelationWeights RelationWeights::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open weights file: " + path);
    return parse(in);
}

double RelationWeights::weight_for(const std::string& predicate) const {
    const auto it = weights_.find(predicate);
    return it != weights_.end() ? it->second : default_weight_;
}

WalkStrategy parse_strategy(std::string_view name) {
    if (name == "uniform" || name == "deepwalk") return WalkStrategy::uniform;
    if (name == "biased") return WalkStrategy::biased;
    if (name == "node2vec") return WalkStrategy::node2vec;
    throw ValidationError("unknown walk strategy: " + std::string(name));
}

const char* strategy_name(WalkStrategy strategy) {
    switch (strategy) {
        case WalkStrategy::uniform: return "uniform";
        case WalkStrategy::biased: return "biased";
        case WalkStrategy::node2vec: return "node2vec";
    }
    return "?";
}

void WalkConfig::validate() const {
    if (walk_length < 1) throw ValidationError("walk_length must be >= 1");
    if (num_walks < 1) throw ValidationError("num_walks must be >= 1");
    if (strategy == WalkStrategy::node2vec && (p <= 0.0 || q <= 0.0))
        throw ValidationError("node2vec parameters p and q must be positive");
    if (threads < 1) throw ValidationError("threads must be >= 1");
}

std::uint32_t weighted_choice(const KnowledgeGraph& kg,
                              std::span<const Edge> neighbors,
                              const RelationWeights& weights, Rng& rng) {
    if (neighbors.empty())
        throw ValidationError("weighted_choice: empty neighbor list");
    std::vector<double> w(neighbors.size());
    for (std::size_t i = 0; i < neighbors.size(); ++i)
        w[i] = weights.weight_for(kg.predicate_name(neighbors[i].predicate));
    return neighbors[rng.weighted(w)].neighbor;
}

std::uint32_t node2vec_step(const KnowledgeGraph& kg, std::uint32_t prev,
                            std::span<const Edge> neighbors, double p, double q,
                            Rng& rng) {
    if (neighbors.empty())
        throw ValidationError("node2vec_step: empty neighbor list");
    if (p <= 0.0 || q <= 0.0)
        throw ValidationError("node2vec parameters p and q must be positive");
    std::vector<double> w(neighbors.size());
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
        const std::uint32_t x = neighbors[i].neighbor;
        if (x == prev)
            w[i] = 1.0 / p;
        else if (kg.adjacent(prev, x))
            w[i] = 1.0;
        else
            w[i] = 1.0 / q;
    }
    return neighbors[rng.weighted(w)].neighbor;
}

namespace {

constexpr std::uint32_t kNoPrev = 0xffffffffu;

// Per-worker walk state. Biased transitions use a cumulative table shared
// across workers (first-order, so it only depends on the current node);
// node2vec tables depend on (prev, curr) and are cached per worker.
struct WalkSampler {
    const KnowledgeGraph& kg;
    const WalkConfig& config;
    const std::vector<double>* biased_cumulative;  // aligned with adjacency spans
    const std::vector<std::size_t>* biased_offsets;
    std::unordered_map<std::uint64_t, std::vector<double>> node2vec_cache;

    std::uint32_t step(std::uint32_t prev, std::uint32_t curr, Rng& rng) {
        const auto nbrs = kg.neighbors(curr);
        switch (config.strategy) {
            case WalkStrategy::uniform:
                return nbrs[rng.below(nbrs.size())].neighbor;
            case WalkStrategy::biased: {
                const std::size_t begin = (*biased_offsets)[curr];
                const std::size_t end = (*biased_offsets)[curr + 1];
                const std::span<const double> cum(
                    biased_cumulative->data() + begin, end - begin);
                return nbrs[rng.from_cumulative(cum)].neighbor;
            }
            case WalkStrategy::node2vec: {
                if (prev == kNoPrev)
                    return nbrs[rng.below(nbrs.size())].neighbor;
                const std::uint64_t key =
                    (static_cast<std::uint64_t>(prev) << 32) | curr;
                auto it = node2vec_cache.find(key);
                if (it == node2vec_cache.end()) {
                    std::vector<double> cum(nbrs.size());
                    double acc = 0.0;
                    for (std::size_t i = 0; i < nbrs.size(); ++i) {
                        const std::uint32_t x = nbrs[i].neighbor;
                        double w;
                        if (x == prev)
                            w = 1.0 / config.p;
                        else if (kg.adjacent(prev, x))
                            w = 1.0;
                        else
                            w = 1.0 / config.q;
                        acc += w;
                        cum[i] = acc;
                    }
                    it = node2vec_cache.emplace(key, std::move(cum)).first;
                }
                return nbrs[rng.from_cumulative(it->second)].neighbor;
            }
        }
        return nbrs[0].neighbor;
    }

    Walk walk_from(std::uint32_t start, Rng& rng) {
        Walk walk;
        walk.reserve(config.walk_length);
        walk.push_back(kg.entity_name(start));
        std::uint32_t prev = kNoPrev;
        std::uint32_t curr = start;
        for (std::size_t i = 1; i < config.walk_length; ++i) {
            if (kg.neighbors(curr).empty()) break;
            const std::uint32_t next = step(prev, curr, rng);
            walk.push_back(kg.entity_name(next));
            prev = curr;
            curr = next;
        }
        return walk;
    }
};

}  // namespace

WalkCorpus generate_walks(const KnowledgeGraph& kg, const WalkConfig& config,
                          const RelationWeights* weights) {
    config.validate();
    if (config.strategy == WalkStrategy::biased && weights == nullptr)
        throw ValidationError("strategy=biased requires relation weights");

    const std::size_t n = kg.entity_count();
    WalkCorpus corpus(n * config.num_walks);
    if (n == 0) return corpus;

    // Biased transitions are first-order: precompute one cumulative weight
    // table over every adjacency list.
    std::vector<double> biased_cumulative;
    std::vector<std::size_t> biased_offsets;
    if (config.strategy == WalkStrategy::biased) {
        std::vector<double> by_predicate(kg.predicates().size());
        for (std::uint32_t pid = 0; pid < by_predicate.size(); ++pid)
            by_predicate[pid] = weights->weight_for(kg.predicate_name(pid));
        biased_offsets.resize(n + 1, 0);
        for (std::uint32_t e = 0; e < n; ++e)
            biased_offsets[e + 1] = biased_offsets[e] + kg.neighbors(e).size();
        biased_cumulative.resize(biased_offsets.back());
        for (std::uint32_t e = 0; e < n; ++e) {
            const auto nbrs = kg.neighbors(e);
            double acc = 0.0;
            for (std::size_t i = 0; i < nbrs.size(); ++i) {
                acc += by_predicate[nbrs[i].predicate];
                biased_cumulative[biased_offsets[e] + i] = acc;
            }
        }
    }

    const auto run_range = [&](std::uint32_t first, std::uint32_t last) {
        WalkSampler sampler{kg, config, &biased_cumulative, &biased_offsets, {}};
        for (std::uint32_t start = first; start < last; ++start) {
            Rng rng(derive_stream(config.seed, start));
            for (std::size_t w = 0; w < config.num_walks; ++w)
                corpus[static_cast<std::size_t>(start) * config.num_walks + w] =
                    sampler.walk_from(start, rng);
        }
    };

    const unsigned workers =
        std::min<unsigned>(config.threads, static_cast<unsigned>(n));
    if (workers <= 1) {
        run_range(0, static_cast<std::uint32_t>(n));
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (unsigned t = 0; t < workers; ++t) {
            const std::uint32_t first = static_cast<std::uint32_t>(t * chunk);
            const std::uint32_t last =
                static_cast<std::uint32_t>(std::min(n, (t + 1) * chunk));
            if (first >= last) break;
            pool.emplace_back(run_range, first, last);
        }
        for (auto& th : pool) th.join();
    }
    return corpus;
}

void write_corpus(std::ostream& out, const WalkCorpus& corpus) {
    for (const Walk& walk : corpus) {
        for (std::size_t i = 0; i < walk.size(); ++i) {
            if (i) out << ' ';
            out << walk[i];
        }
        out << '\n';
    }
}

void save_corpus(const std::string& path, const WalkCorpus& corpus) {
    std::ofstream out(path);
    if (!out) throw RuntimeError("cannot write corpus file: " + path);
    write_corpus(out, corpus);
}

WalkCorpus parse_corpus(std::istream& in) {
    WalkCorpus corpus;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        Walk walk;
        std::istringstream tokens(line);
        std::string token;
        while (tokens >> token) walk.push_back(token);
        if (!walk.empty()) corpus.push_back(std::move(walk));
    }
    return corpus;
}

WalkCorpus load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open corpus file: " + path);
    return parse_corpus(in);
}

}  // namespace kgrec
