#include <doctest.h>

#include <set>
#include <sstream>

#include "kgrec/error.hpp"
#include "kgrec/graph.hpp"
#include "kgrec/recommender.hpp"
#include "kgrec/skipgram.hpp"
#include "kgrec/synth.hpp"
#include "kgrec/walker.hpp"
#include "oracles.hpp"

using namespace kgrec;

TEST_SUITE("synth") {

TEST_CASE("forced clusters: ground truth is the co-member set") {
    SynthSpec spec;
    spec.n_texts = 10;
    spec.clusters = 2;
    spec.share_probability = 1.0;
    spec.seed = 4;
    const auto result = generate_synthetic_kg(spec);
    REQUIRE(result.ground_truth.size() == 10);
    for (const RankingCase& c : result.ground_truth) {
        CHECK(c.ground_truth.size() == 4);
        CHECK(std::find(c.ground_truth.begin(), c.ground_truth.end(), c.anchor) ==
              c.ground_truth.end());
    }
}

TEST_CASE("infeasible specs are rejected") {
    SynthSpec spec;
    spec.clusters = 200;
    spec.n_texts = 100;
    CHECK_THROWS_AS(generate_synthetic_kg(spec), ValidationError);
    SynthSpec bad_share;
    bad_share.share_probability = 1.5;
    CHECK_THROWS_AS(generate_synthetic_kg(bad_share), ValidationError);
    SynthSpec bad_range;
    bad_range.genres_per_text = {3, 1};
    CHECK_THROWS_AS(generate_synthetic_kg(bad_range), ValidationError);
}

TEST_CASE("triple count stays within 20% of the expected attribute volume") {
    SynthSpec spec;
    spec.n_texts = 100;
    spec.seed = 8;
    const auto result = generate_synthetic_kg(spec);
    // per text: mean genres 1.5, themes 4, subthemes 3, one author
    const double expected = 100.0 * (1.5 + 4 + 3 + 1);
    const double actual = static_cast<double>(result.triples.size());
    CHECK(actual > expected * 0.8);
    CHECK(actual < expected * 1.2);
}

TEST_CASE("deterministic under seed, varies across seeds") {
    SynthSpec spec;
    spec.n_texts = 30;
    spec.seed = 12;
    const auto a = generate_synthetic_kg(spec);
    const auto b = generate_synthetic_kg(spec);
    CHECK(a.triples == b.triples);
    spec.seed = 13;
    const auto c = generate_synthetic_kg(spec);
    CHECK(a.triples != c.triples);
}

TEST_CASE("every text appears with in-range attributes") {
    SynthSpec spec;
    spec.n_texts = 40;
    spec.seed = 3;
    const auto result = generate_synthetic_kg(spec);
    const KnowledgeGraph kg(result.triples);
    CHECK(result.text_names.size() == 40);
    for (const std::string& text : result.text_names)
        CHECK(kg.entity_id(text).has_value());
    for (const std::string& text : result.text_names) {
        std::size_t genres = 0;
        for (const Triple& t : kg.triples())
            if (t.subject == text && t.predicate == "has_genre") ++genres;
        CHECK(genres >= spec.genres_per_text.lo);
        CHECK(genres <= spec.genres_per_text.hi);
    }
}

TEST_CASE("null structure: no planted signal means chance-level separation") {
    SynthSpec spec;
    spec.n_texts = 40;
    spec.clusters = 4;
    spec.share_probability = 0.0;
    spec.seed = 21;
    const auto synth = generate_synthetic_kg(spec);
    const KnowledgeGraph kg(synth.triples);

    WalkConfig wc;
    wc.walk_length = 20;
    wc.num_walks = 10;
    wc.seed = 5;
    TrainConfig tc;
    tc.dimension = 32;
    tc.window = 5;
    tc.epochs = 3;
    tc.seed = 6;
    const auto emb = train_skipgram(generate_walks(kg, wc), tc);

    // cosine of co-member pairs vs non-member pairs should not separate
    std::vector<double> member_scores, stranger_scores;
    for (std::size_t i = 0; i < synth.text_names.size(); ++i)
        for (std::size_t j = i + 1; j < synth.text_names.size(); ++j) {
            const double score = cosine(emb.row(synth.text_names[i]),
                                        emb.row(synth.text_names[j]));
            (synth.cluster_of[i] == synth.cluster_of[j] ? member_scores
                                                        : stranger_scores)
                .push_back(score);
        }
    const double membership_auc = oracle::auc_brute(member_scores, stranger_scores);
    CHECK(membership_auc > 0.35);
    CHECK(membership_auc < 0.65);
}

TEST_CASE("ground-truth file format round-trips through the parser") {
    SynthSpec spec;
    spec.n_texts = 8;
    spec.clusters = 2;
    spec.seed = 2;
    const auto result = generate_synthetic_kg(spec);
    std::ostringstream out;
    write_ground_truth(out, result.ground_truth);
    std::istringstream in(out.str());
    const auto cases = parse_ranking_cases(in);
    REQUIRE(cases.size() == result.ground_truth.size());
    for (std::size_t i = 0; i < cases.size(); ++i) {
        CHECK(cases[i].anchor == result.ground_truth[i].anchor);
        auto expected = result.ground_truth[i].ground_truth;
        std::sort(expected.begin(), expected.end());
        CHECK(cases[i].ground_truth == expected);
    }
}

}  // TEST_SUITE
