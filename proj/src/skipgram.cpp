#include "kgrec/skipgram.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "kgrec/error.hpp"
#include "kgrec/rng.hpp"

namespace kgrec {

Vocabulary Vocabulary::from_corpus(const WalkCorpus& corpus) {
    std::vector<std::string> names;
    for (const Walk& walk : corpus)
        for (const std::string& entity : walk) names.push_back(entity);
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    return from_names(std::move(names));
}

Vocabulary Vocabulary::from_names(std::vector<std::string> sorted_names) {
    Vocabulary v;
    v.names = std::move(sorted_names);
    v.index.reserve(v.names.size());
    for (std::uint32_t i = 0; i < v.names.size(); ++i) v.index.emplace(v.names[i], i);
    return v;
}

std::optional<std::uint32_t> Vocabulary::id_of(const std::string& entity) const {
    const auto it = index.find(entity);
    if (it == index.end()) return std::nullopt;
    return it->second;
}

void TrainConfig::validate() const {
    if (dimension < 1) throw ValidationError("dimension must be >= 1");
    if (window < 1) throw ValidationError("window must be >= 1");
    if (epochs < 1) throw ValidationError("epochs must be >= 1");
    if (learning_rate <= 0.0) throw ValidationError("learning_rate must be positive");
    if (negatives < 1) throw ValidationError("negatives must be >= 1");
    if (threads < 1) throw ValidationError("threads must be >= 1");
}

EmbeddingTable::EmbeddingTable(Vocabulary vocab, std::size_t dimension)
    : vocab_(std::move(vocab)),
      dimension_(dimension),
      values_(vocab_.size() * dimension, 0.0) {}

std::span<const double> EmbeddingTable::row(std::uint32_t id) const {
    return {values_.data() + static_cast<std::size_t>(id) * dimension_, dimension_};
}

std::span<double> EmbeddingTable::row(std::uint32_t id) {
    return {values_.data() + static_cast<std::size_t>(id) * dimension_, dimension_};
}

std::span<const double> EmbeddingTable::row(const std::string& entity) const {
    const auto id = vocab_.id_of(entity);
    if (!id) throw ValidationError("unknown entity: " + entity);
    return row(*id);
}

std::optional<std::uint32_t> EmbeddingTable::id_of(const std::string& entity) const {
    return vocab_.id_of(entity);
}

EmbeddingTable EmbeddingTable::slice(std::size_t offset, std::size_t width) const {
    if (offset + width > dimension_)
        throw ValidationError("slice exceeds table dimension");
    EmbeddingTable out(vocab_, width);
    for (std::uint32_t r = 0; r < size(); ++r) {
        const auto src = row(r);
        auto dst = out.row(r);
        std::copy(src.begin() + offset, src.begin() + offset + width, dst.begin());
    }
    return out;
}

namespace {

void append_double(std::string& line, double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    line.append(buf, res.ptr);
}

}  // namespace

void EmbeddingTable::save(std::ostream& out) const {
    out << size() << ' ' << dimension_ << '\n';
    std::string line;
    for (std::uint32_t r = 0; r < size(); ++r) {
        line.clear();
        line += vocab_.names[r];
        for (double v : row(r)) {
            line += ' ';
            append_double(line, v);
        }
        line += '\n';
        out << line;
    }
}

void EmbeddingTable::save_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw RuntimeError("cannot write embedding file: " + path);
    save(out);
}

EmbeddingTable EmbeddingTable::parse(std::istream& in) {
    std::size_t n = 0, d = 0;
    if (!(in >> n >> d)) throw ParseError("bad embedding header", 1);
    std::vector<std::string> names(n);
    std::vector<double> values(n * d);
    for (std::size_t r = 0; r < n; ++r) {
        if (!(in >> names[r])) throw ParseError("truncated embedding file", r + 2);
        for (std::size_t c = 0; c < d; ++c)
            if (!(in >> values[r * d + c]))
                throw ParseError("truncated embedding row", r + 2);
    }
    // Rows are re-sorted so lookups match tables built in memory.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return names[a] < names[b]; });
    std::vector<std::string> sorted_names(n);
    for (std::size_t i = 0; i < n; ++i) sorted_names[i] = names[order[i]];
    EmbeddingTable table(Vocabulary::from_names(std::move(sorted_names)), d);
    for (std::size_t i = 0; i < n; ++i) {
        auto dst = table.row(static_cast<std::uint32_t>(i));
        std::copy_n(values.begin() + order[i] * d, d, dst.begin());
    }
    return table;
}

EmbeddingTable EmbeddingTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open embedding file: " + path);
    return parse(in);
}

namespace {

// Unrolled into independent accumulators so the compiler can vectorize the
// reduction without reassociation flags.
template <typename T>
T dot(const T* a, const T* b, std::size_t n) {
    T s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    for (; i < n; ++i) s0 += a[i] * b[i];
    return (s0 + s1) + (s2 + s3);
}

template <typename T>
void axpy(T alpha, const T* x, T* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

template <typename T>
T sigmoid(T x) {
    return T(1) / (T(1) + std::exp(-x));
}

// -log(sigmoid(x)) without overflow for large negative x.
template <typename T>
double softplus_neg(T x) {
    const double v = static_cast<double>(x);
    if (v > 0.0) return std::log1p(std::exp(-v));
    return -v + std::log1p(std::exp(v));
}

}  // namespace

template <typename T>
SkipgramModelT<T>::SkipgramModelT(std::size_t vocab, std::size_t dim)
    : vocab_size(vocab),
      dimension(dim),
      input(vocab * dim, T(0)),
      output(vocab * dim, T(0)) {}

template <typename T>
double SkipgramModelT<T>::pair_loss(std::uint32_t target, std::uint32_t positive,
                                    std::span<const std::uint32_t> negatives) const {
    const T* t = input.data() + static_cast<std::size_t>(target) * dimension;
    double loss = softplus_neg(
        dot(t, output.data() + static_cast<std::size_t>(positive) * dimension,
            dimension));
    for (std::uint32_t n : negatives)
        loss += softplus_neg(
            -dot(t, output.data() + static_cast<std::size_t>(n) * dimension,
                 dimension));
    return loss;
}

template <typename T>
void SkipgramModelT<T>::pair_gradients(std::uint32_t target, std::uint32_t positive,
                                       std::span<const std::uint32_t> negatives,
                                       std::span<T> grad_input,
                                       std::span<T> grad_output) const {
    const T* t = input.data() + static_cast<std::size_t>(target) * dimension;
    T* gt = grad_input.data() + static_cast<std::size_t>(target) * dimension;

    const auto contribute = [&](std::uint32_t ctx, T label) {
        const T* o = output.data() + static_cast<std::size_t>(ctx) * dimension;
        T* go = grad_output.data() + static_cast<std::size_t>(ctx) * dimension;
        const T g = sigmoid(dot(t, o, dimension)) - label;
        axpy(g, o, gt, dimension);
        axpy(g, t, go, dimension);
    };
    contribute(positive, T(1));
    for (std::uint32_t n : negatives) contribute(n, T(0));
}

template <typename T>
double SkipgramModelT<T>::sgd_step(std::uint32_t target, std::uint32_t positive,
                                   std::span<const std::uint32_t> negatives,
                                   T learning_rate, T* scratch, bool track_loss) {
    T* t = input.data() + static_cast<std::size_t>(target) * dimension;
    std::memset(scratch, 0, dimension * sizeof(T));
    double loss = 0.0;

    const auto contribute = [&](std::uint32_t ctx, T label) {
        T* o = output.data() + static_cast<std::size_t>(ctx) * dimension;
        const T s = dot(t, o, dimension);
        if (track_loss) loss += label > T(0.5) ? softplus_neg(s) : softplus_neg(-s);
        const T g = sigmoid(s) - label;
        const T step = -learning_rate * g;
        // one fused pass: scratch += g*o, o += step*t
        for (std::size_t i = 0; i < dimension; ++i) {
            const T oi = o[i];
            scratch[i] += g * oi;
            o[i] = oi + step * t[i];
        }
    };
    contribute(positive, T(1));
    for (std::uint32_t n : negatives) contribute(n, T(0));
    axpy(-learning_rate, scratch, t, dimension);
    return loss;
}

template struct SkipgramModelT<float>;
template struct SkipgramModelT<double>;

namespace {

struct EncodedCorpus {
    std::vector<std::vector<std::uint32_t>> walks;
    std::vector<std::size_t> counts;  // unigram frequency per vocabulary id
    std::size_t tokens = 0;
};

EncodedCorpus encode_corpus(const WalkCorpus& corpus, const Vocabulary& vocab) {
    EncodedCorpus enc;
    enc.counts.assign(vocab.size(), 0);
    enc.walks.reserve(corpus.size());
    for (const Walk& walk : corpus) {
        std::vector<std::uint32_t> ids;
        ids.reserve(walk.size());
        for (const std::string& entity : walk) {
            const std::uint32_t id = *vocab.id_of(entity);
            ids.push_back(id);
            ++enc.counts[id];
        }
        enc.tokens += ids.size();
        enc.walks.push_back(std::move(ids));
    }
    return enc;
}

// Walker alias sampler over the unigram^0.75 noise distribution: one draw
// costs two rng calls and two loads regardless of vocabulary size.
class AliasSampler {
public:
    explicit AliasSampler(const std::vector<std::size_t>& counts) {
        const std::size_t n = counts.size();
        std::vector<double> weights(n);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            weights[i] = std::pow(static_cast<double>(counts[i]), 0.75);
            total += weights[i];
        }
        prob_.assign(n, 1.0);
        alias_.assign(n, 0);
        std::vector<std::uint32_t> small, large;
        std::vector<double> scaled(n);
        for (std::size_t i = 0; i < n; ++i) {
            scaled[i] = weights[i] * static_cast<double>(n) / total;
            (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
        }
        while (!small.empty() && !large.empty()) {
            const std::uint32_t s = small.back();
            small.pop_back();
            const std::uint32_t l = large.back();
            prob_[s] = scaled[s];
            alias_[s] = l;
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            if (scaled[l] < 1.0) {
                large.pop_back();
                small.push_back(l);
            }
        }
        count_ = n;
    }

    std::uint32_t sample(Rng& rng) const {
        const std::uint32_t slot = static_cast<std::uint32_t>(
            (static_cast<unsigned __int128>(rng.next()) * count_) >> 64);
        return rng.unit() < prob_[slot] ? slot : alias_[slot];
    }

private:
    std::vector<double> prob_;
    std::vector<std::uint32_t> alias_;
    std::uint64_t count_ = 0;
};

struct TrainShared {
    const EncodedCorpus& corpus;
    const TrainConfig& config;
    const AliasSampler& noise;
    SkipgramModelT<float>& model;
    std::size_t total_tokens;  // across all epochs
    bool track_loss;
};

// One pass over a range of walks; loss and pair count are returned through
// the out-params. `tokens_before` positions the learning-rate decay.
void train_walks(TrainShared& sh, std::size_t first_walk, std::size_t last_walk,
                 std::size_t epoch, std::size_t tokens_before, std::uint64_t stream,
                 double& loss_sum, std::size_t& pair_count) {
    Rng rng(stream);
    std::vector<float> scratch(sh.config.dimension);
    std::vector<std::uint32_t> negatives;
    const double lr0 = sh.config.learning_rate;
    const double lr_floor = sh.config.learning_rate_floor;
    std::size_t tokens_done =
        epoch * sh.corpus.tokens + tokens_before;

    for (std::size_t wi = first_walk; wi < last_walk; ++wi) {
        const auto& walk = sh.corpus.walks[wi];
        for (std::size_t t = 0; t < walk.size(); ++t) {
            const double progress = static_cast<double>(tokens_done) /
                                    static_cast<double>(sh.total_tokens + 1);
            const float lr = static_cast<float>(std::max(lr_floor, lr0 * (1.0 - progress)));
            ++tokens_done;

            if (sh.config.subsample > 0.0) {
                const double freq =
                    static_cast<double>(sh.corpus.counts[walk[t]]) /
                    static_cast<double>(sh.corpus.tokens);
                const double keep =
                    std::sqrt(sh.config.subsample / freq) + sh.config.subsample / freq;
                if (keep < 1.0 && rng.unit() > keep) continue;
            }

            const std::size_t lo = t >= sh.config.window ? t - sh.config.window : 0;
            const std::size_t hi = std::min(walk.size(), t + sh.config.window + 1);
            for (std::size_t j = lo; j < hi; ++j) {
                if (j == t) continue;
                const std::uint32_t target = walk[t];
                const std::uint32_t context = walk[j];
                negatives.clear();
                while (negatives.size() < sh.config.negatives) {
                    const std::uint32_t cand = sh.noise.sample(rng);
                    if (cand == context) continue;
                    negatives.push_back(cand);
                }
                loss_sum += sh.model.sgd_step(target, context, negatives, lr,
                                              scratch.data(), sh.track_loss);
                ++pair_count;
            }
        }
    }
}

}  // namespace

EmbeddingTable train_skipgram(const WalkCorpus& corpus, const TrainConfig& config,
                              TrainStats* stats) {
    config.validate();
    if (corpus.empty()) throw ValidationError("training corpus is empty");

    Vocabulary vocab = Vocabulary::from_corpus(corpus);
    if (vocab.size() < 2)
        throw ValidationError("corpus must contain at least 2 distinct entities");

    const EncodedCorpus enc = encode_corpus(corpus, vocab);
    const AliasSampler noise(enc.counts);

    SkipgramModelT<float> model(vocab.size(), config.dimension);
    {
        Rng init(derive_stream(config.seed, 0x696e6974));
        const double half = 0.5 / static_cast<double>(config.dimension);
        for (float& v : model.input) v = static_cast<float>(init.range(-half, half));
    }

    TrainShared sh{enc,   config, noise, model, config.epochs * enc.tokens,
                   stats != nullptr};
    if (stats) {
        stats->epoch_loss.clear();
        stats->pair_count = 0;
    }

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        double loss_sum = 0.0;
        std::size_t pairs = 0;
        const unsigned workers = std::min<std::size_t>(
            config.threads, std::max<std::size_t>(1, enc.walks.size()));
        if (workers <= 1) {
            train_walks(sh, 0, enc.walks.size(), epoch, 0,
                        derive_stream(config.seed, 1 + epoch), loss_sum, pairs);
        } else {
            // Lock-free parallel updates; deterministic only for threads==1.
            std::vector<std::thread> pool;
            std::vector<double> losses(workers, 0.0);
            std::vector<std::size_t> counts(workers, 0);
            std::vector<std::size_t> bounds(workers + 1, 0);
            std::vector<std::size_t> token_prefix(workers, 0);
            const std::size_t chunk = (enc.walks.size() + workers - 1) / workers;
            for (unsigned w = 0; w < workers; ++w)
                bounds[w + 1] = std::min(enc.walks.size(), (w + 1) * chunk);
            std::size_t prefix = 0;
            for (unsigned w = 0; w < workers; ++w) {
                token_prefix[w] = prefix;
                for (std::size_t i = bounds[w]; i < bounds[w + 1]; ++i)
                    prefix += enc.walks[i].size();
            }
            for (unsigned w = 0; w < workers; ++w)
                pool.emplace_back([&, w] {
                    train_walks(sh, bounds[w], bounds[w + 1], epoch,
                                token_prefix[w],
                                derive_stream(config.seed, 1 + epoch * 131 + w),
                                losses[w], counts[w]);
                });
            for (auto& th : pool) th.join();
            for (unsigned w = 0; w < workers; ++w) {
                loss_sum += losses[w];
                pairs += counts[w];
            }
        }
        if (stats) {
            stats->epoch_loss.push_back(pairs ? loss_sum / static_cast<double>(pairs)
                                              : 0.0);
            stats->pair_count = pairs;
        }
    }

    EmbeddingTable table(std::move(vocab), config.dimension);
    for (std::uint32_t r = 0; r < table.size(); ++r) {
        auto dst = table.row(r);
        std::copy_n(model.input.begin() + static_cast<std::size_t>(r) * config.dimension,
                    config.dimension, dst.begin());
    }
    return table;
}

EmbeddingTable concat_embeddings(const EmbeddingTable& a, const EmbeddingTable& b) {
    if (!(a.vocab() == b.vocab())) {
        std::vector<std::string> only_a, only_b;
        std::set_difference(a.vocab().names.begin(), a.vocab().names.end(),
                            b.vocab().names.begin(), b.vocab().names.end(),
                            std::back_inserter(only_a));
        std::set_difference(b.vocab().names.begin(), b.vocab().names.end(),
                            a.vocab().names.begin(), a.vocab().names.end(),
                            std::back_inserter(only_b));
        std::ostringstream msg;
        msg << "vocabulary mismatch:";
        msg << " only in first:";
        for (const auto& n : only_a) msg << ' ' << n;
        msg << "; only in second:";
        for (const auto& n : only_b) msg << ' ' << n;
        throw ValidationError(msg.str());
    }
    EmbeddingTable out(a.vocab(), a.dimension() + b.dimension());
    for (std::uint32_t r = 0; r < out.size(); ++r) {
        auto dst = out.row(r);
        const auto ra = a.row(r);
        const auto rb = b.row(r);
        std::copy(ra.begin(), ra.end(), dst.begin());
        std::copy(rb.begin(), rb.end(), dst.begin() + a.dimension());
    }
    return out;
}

}  // namespace kgrec
