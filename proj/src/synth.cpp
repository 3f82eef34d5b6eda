#include "kgrec/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>

#include "kgrec/error.hpp"
#include "kgrec/rng.hpp"

namespace kgrec {

void SynthSpec::validate() const {
    if (n_texts < 1 || n_genres < 1 || n_themes < 1 || n_subthemes < 1 ||
        n_authors < 1)
        throw ValidationError("synthetic spec: all entity counts must be >= 1");
    if (clusters < 1) throw ValidationError("synthetic spec: clusters must be >= 1");
    if (clusters > n_texts)
        throw ValidationError("synthetic spec: more clusters than texts");
    if (share_probability < 0.0 || share_probability > 1.0)
        throw ValidationError("synthetic spec: share probability must be in [0,1]");
    for (const CountRange& r :
         {genres_per_text, themes_per_text, subthemes_per_text})
        if (r.lo > r.hi)
            throw ValidationError("synthetic spec: attribute range lo > hi");
}

namespace {

std::string padded_name(const std::string& prefix, std::size_t i, std::size_t total) {
    std::size_t width = 1;
    for (std::size_t rest = total; rest >= 10; rest /= 10) ++width;
    std::string digits = std::to_string(i);
    return prefix + "_" + std::string(width - digits.size(), '0') + digits;
}

constexpr std::size_t kBundlesPerCluster = 3;

// One attribute family: a global pool plus per-cluster profiles carved from
// a shuffled ordering (overlapping slices when the pool is small). A
// bundle-local family further splits each profile into per-bundle slices, so
// cluster-mates in the same bundle form tight attribute communities; a
// held-out edge then stays predictable from the text's remaining attributes
// instead of from cluster membership alone. Cluster-wide families (genres)
// act as the glue holding a cluster together.
struct AttributePool {
    std::vector<std::string> names;
    std::vector<std::vector<std::uint32_t>> profiles;
    bool bundle_local = false;

    AttributePool(const std::string& prefix, std::size_t size,
                  std::size_t clusters, std::size_t profile_size, bool local,
                  Rng& rng)
        : bundle_local(local) {
        names.reserve(size);
        for (std::size_t i = 0; i < size; ++i)
            names.push_back(padded_name(prefix, i, size));
        std::vector<std::uint32_t> order(size);
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        profile_size = std::min(profile_size, size);
        const std::size_t stride = std::max<std::size_t>(1, size / clusters);
        profiles.resize(clusters);
        for (std::size_t c = 0; c < clusters; ++c) {
            profiles[c].reserve(profile_size);
            for (std::size_t j = 0; j < profile_size; ++j)
                profiles[c].push_back(order[(c * stride + j) % size]);
        }
    }

    // A shared draw comes from the cluster profile (or the text's bundle
    // slice of it); a miss is an idiosyncratic attribute of the text itself.
    std::optional<std::uint32_t> draw(std::size_t cluster, double share,
                                      std::size_t bundle, Rng& rng) const {
        const auto& profile = profiles[cluster];
        if (profile.empty() || rng.unit() >= share) return std::nullopt;
        if (!bundle_local) return profile[rng.below(profile.size())];
        const std::size_t slice =
            std::max<std::size_t>(1, profile.size() / kBundlesPerCluster);
        const std::size_t base = (bundle % kBundlesPerCluster) * slice;
        return profile[(base + rng.below(slice)) % profile.size()];
    }
};

}  // namespace

SynthResult generate_synthetic_kg(const SynthSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);

    SynthResult result;
    result.text_names.reserve(spec.n_texts);
    for (std::size_t i = 0; i < spec.n_texts; ++i)
        result.text_names.push_back(padded_name("Text", i, spec.n_texts));

    result.cluster_of.resize(spec.n_texts);
    for (std::size_t i = 0; i < spec.n_texts; ++i)
        result.cluster_of[i] = i * spec.clusters / spec.n_texts;

    const auto profile_size = [&](std::size_t pool, const CountRange& range) {
        return std::max<std::size_t>(std::max<std::size_t>(1, pool / spec.clusters),
                                     range.hi);
    };
    AttributePool genres("Genre", spec.n_genres, spec.clusters,
                         profile_size(spec.n_genres, spec.genres_per_text), true,
                         rng);
    AttributePool themes("Theme", spec.n_themes, spec.clusters,
                         profile_size(spec.n_themes, spec.themes_per_text), true,
                         rng);
    AttributePool subthemes("Subtheme", spec.n_subthemes, spec.clusters,
                            profile_size(spec.n_subthemes, spec.subthemes_per_text),
                            true, rng);
    AttributePool authors("Author", spec.n_authors, spec.clusters,
                          profile_size(spec.n_authors, CountRange{1, 1}), true,
                          rng);

    const auto emit_attributes = [&](const std::string& text, std::size_t cluster,
                                     std::size_t bundle, const AttributePool& pool,
                                     const CountRange& range,
                                     const std::string& prefix,
                                     const std::string& predicate) {
        const std::size_t want =
            range.lo + (range.hi > range.lo ? rng.below(range.hi - range.lo + 1) : 0);
        std::set<std::uint32_t> chosen;
        std::size_t personal = 0;
        for (std::size_t attempt = 0;
             chosen.size() + personal < want && attempt < 50 * want + 50; ++attempt) {
            const auto id = pool.draw(cluster, spec.share_probability, bundle, rng);
            if (id) {
                chosen.insert(*id);
            } else {
                result.triples.push_back(
                    {text, predicate,
                     prefix + "_of_" + text + "_" + std::to_string(personal), false});
                ++personal;
            }
        }
        for (std::uint32_t id : chosen)
            result.triples.push_back({text, predicate, pool.names[id], false});
    };

    for (std::size_t i = 0; i < spec.n_texts; ++i) {
        const std::string& text = result.text_names[i];
        const std::size_t cluster = result.cluster_of[i];
        const std::size_t bundle = rng.below(kBundlesPerCluster);
        const auto author =
            authors.draw(cluster, spec.share_probability, bundle, rng);
        result.triples.push_back(
            {text, "has_author",
             author ? authors.names[*author] : "Author_of_" + text, false});
        emit_attributes(text, cluster, bundle, genres, spec.genres_per_text,
                        "Genre", "has_genre");
        emit_attributes(text, cluster, bundle, themes, spec.themes_per_text,
                        "Theme", "has_theme");
        emit_attributes(text, cluster, bundle, subthemes,
                        spec.subthemes_per_text, "Subtheme", "has_subtheme");
    }

    // Ground truth: cluster co-members; singleton clusters yield no case.
    for (std::size_t i = 0; i < spec.n_texts; ++i) {
        RankingCase c;
        c.anchor = result.text_names[i];
        for (std::size_t j = 0; j < spec.n_texts; ++j)
            if (j != i && result.cluster_of[j] == result.cluster_of[i])
                c.ground_truth.push_back(result.text_names[j]);
        if (!c.ground_truth.empty()) result.ground_truth.push_back(std::move(c));
    }
    return result;
}

void write_ground_truth(std::ostream& out, std::span<const RankingCase> cases) {
    for (const RankingCase& c : cases) {
        out << c.anchor << '\t';
        for (std::size_t i = 0; i < c.ground_truth.size(); ++i) {
            if (i) out << ',';
            out << c.ground_truth[i];
        }
        out << '\n';
    }
}

void save_ground_truth(const std::string& path, std::span<const RankingCase> cases) {
    std::ofstream out(path);
    if (!out) throw RuntimeError("cannot write ground-truth file: " + path);
    write_ground_truth(out, cases);
}

}  // namespace kgrec
