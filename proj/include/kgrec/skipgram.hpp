#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "kgrec/walker.hpp"

namespace kgrec {

// Entity <-> contiguous index bijection over a corpus, in sorted name order.
struct Vocabulary {
    std::vector<std::string> names;
    std::unordered_map<std::string, std::uint32_t> index;

    static Vocabulary from_corpus(const WalkCorpus& corpus);
    static Vocabulary from_names(std::vector<std::string> sorted_names);

    std::size_t size() const { return names.size(); }
    std::optional<std::uint32_t> id_of(const std::string& entity) const;

    bool operator==(const Vocabulary& other) const { return names == other.names; }
};

struct TrainConfig {
    std::size_t dimension = 128;
    std::size_t window = 5;  // fixed context window, both sides
    std::size_t epochs = 5;
    double learning_rate = 0.025;         // decays linearly per token
    double learning_rate_floor = 1e-4;
    std::size_t negatives = 5;            // noise entities per (target, context)
    double subsample = 0.0;               // 0 disables frequent-entity subsampling
    std::uint64_t seed = 0;
    unsigned threads = 1;  // >1 trades determinism for speed (lock-free updates)

    void validate() const;
};

class EmbeddingTable {
public:
    EmbeddingTable() = default;
    EmbeddingTable(Vocabulary vocab, std::size_t dimension);

    std::size_t size() const { return vocab_.size(); }
    std::size_t dimension() const { return dimension_; }
    const Vocabulary& vocab() const { return vocab_; }

    std::span<const double> row(std::uint32_t id) const;
    std::span<double> row(std::uint32_t id);
    // Throws ValidationError naming the entity when it is unknown.
    std::span<const double> row(const std::string& entity) const;
    std::optional<std::uint32_t> id_of(const std::string& entity) const;

    // Column slice [offset, offset + width) as a new table over the same
    // vocabulary.
    EmbeddingTable slice(std::size_t offset, std::size_t width) const;

    // Dump format: first line "N d", then one line per entity:
    // identifier followed by d decimal values (shortest round-trip form).
    void save(std::ostream& out) const;
    void save_file(const std::string& path) const;
    static EmbeddingTable parse(std::istream& in);
    static EmbeddingTable load(const std::string& path);

private:
    Vocabulary vocab_;
    std::size_t dimension_ = 0;
    std::vector<double> values_;  // row-major |vocab| x dimension
};

// Input/output parameter matrices plus the negative-sampling objective.
// Templated on the scalar type: training runs the float instantiation for
// speed, while gradients are checked against finite differences on the
// double instantiation of the same code.
template <typename T>
struct SkipgramModelT {
    std::size_t vocab_size = 0;
    std::size_t dimension = 0;
    std::vector<T> input;   // row-major
    std::vector<T> output;

    SkipgramModelT(std::size_t vocab, std::size_t dim);

    double pair_loss(std::uint32_t target, std::uint32_t positive,
                     std::span<const std::uint32_t> negatives) const;

    // Accumulates d(loss)/d(input) and d(loss)/d(output) into full-size
    // buffers (same layout as the matrices).
    void pair_gradients(std::uint32_t target, std::uint32_t positive,
                        std::span<const std::uint32_t> negatives,
                        std::span<T> grad_input, std::span<T> grad_output) const;

    // Fused SGD step; scratch must hold `dimension` scalars. Returns the
    // pair loss before the update when track_loss is set, otherwise 0.
    double sgd_step(std::uint32_t target, std::uint32_t positive,
                    std::span<const std::uint32_t> negatives, T learning_rate,
                    T* scratch, bool track_loss);
};

extern template struct SkipgramModelT<float>;
extern template struct SkipgramModelT<double>;

using SkipgramModel = SkipgramModelT<double>;

struct TrainStats {
    std::vector<double> epoch_loss;  // mean pair loss per epoch
    std::size_t pair_count = 0;      // (target, context) pairs per epoch
};

// Skip-gram with negative sampling over walk "sentences". Noise entities are
// drawn from the corpus unigram distribution raised to 0.75. Deterministic
// for threads == 1.
EmbeddingTable train_skipgram(const WalkCorpus& corpus, const TrainConfig& config,
                              TrainStats* stats = nullptr);

// Row-wise concatenation of two tables over identical vocabularies.
EmbeddingTable concat_embeddings(const EmbeddingTable& a, const EmbeddingTable& b);

}  // namespace kgrec
