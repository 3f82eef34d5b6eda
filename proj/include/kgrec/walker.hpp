#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kgrec/graph.hpp"
#include "kgrec/rng.hpp"

namespace kgrec {

// Per-predicate transition weights for biased walks. Unlisted predicates
// fall back to the minimum of the listed weights.
class RelationWeights {
public:
    explicit RelationWeights(std::map<std::string, double> weights);

    // Weight file: "predicate<TAB>weight" per line, '#' comments.
    static RelationWeights parse(std::istream& in);
    static RelationWeights load(const std::string& path);

    double weight_for(const std::string& predicate) const;
    double default_weight() const { return default_weight_; }
    const std::map<std::string, double>& weights() const { return weights_; }

private:
    std::map<std::string, double> weights_;
    double default_weight_ = 1.0;
};

enum class WalkStrategy { uniform, biased, node2vec };

WalkStrategy parse_strategy(std::string_view name);
const char* strategy_name(WalkStrategy strategy);

struct WalkConfig {
    WalkStrategy strategy = WalkStrategy::uniform;
    std::size_t walk_length = 80;
    std::size_t num_walks = 10;
    double p = 1.0;  // node2vec return parameter
    double q = 1.0;  // node2vec in-out parameter
    std::uint64_t seed = 0;
    unsigned threads = 1;

    void validate() const;
};

using Walk = std::vector<std::string>;
using WalkCorpus = std::vector<Walk>;

// One transition of the weighted walk: picks a neighbor with probability
// proportional to its relation's weight, normalized over the neighbor list.
std::uint32_t weighted_choice(const KnowledgeGraph& kg,
                              std::span<const Edge> neighbors,
                              const RelationWeights& weights, Rng& rng);

// Second-order transition: unnormalized weight 1/p back to prev, 1 to
// neighbors shared with prev, 1/q outward.
std::uint32_t node2vec_step(const KnowledgeGraph& kg, std::uint32_t prev,
                            std::span<const Edge> neighbors, double p, double q,
                            Rng& rng);

// num_walks walks from every entity, start nodes in sorted-entity order.
// Walks end early only at neighborless nodes. Each start node draws from its
// own stream derived from (seed, start index), so the corpus is identical
// for any thread count. weights must be present iff strategy == biased.
WalkCorpus generate_walks(const KnowledgeGraph& kg, const WalkConfig& config,
                          const RelationWeights* weights = nullptr);

// Corpus file: one walk per line, space-separated entity identifiers.
void write_corpus(std::ostream& out, const WalkCorpus& corpus);
void save_corpus(const std::string& path, const WalkCorpus& corpus);
WalkCorpus parse_corpus(std::istream& in);
WalkCorpus load_corpus(const std::string& path);

}  // namespace kgrec
