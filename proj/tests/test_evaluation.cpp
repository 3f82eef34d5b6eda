#include <doctest.h>

#include <set>
#include <sstream>

#include "kgrec/error.hpp"
#include "kgrec/evaluation.hpp"
#include "kgrec/rng.hpp"
#include "oracles.hpp"

using namespace kgrec;

namespace {

// n distinct entity-valued triples over a cycle, all entities covered
KnowledgeGraph cycle_graph(std::size_t n_triples, std::size_t n_entities) {
    std::vector<Triple> triples;
    std::size_t emitted = 0;
    for (std::size_t hop = 1; emitted < n_triples; ++hop)
        for (std::size_t i = 0; i < n_entities && emitted < n_triples;
             ++i, ++emitted)
            triples.push_back({"E" + std::to_string(i), "p",
                               "E" + std::to_string((i + hop) % n_entities),
                               false});
    return KnowledgeGraph(std::move(triples));
}

EmbeddingTable table_with(const std::vector<std::string>& names,
                          const std::vector<std::vector<double>>& rows) {
    EmbeddingTable t(Vocabulary::from_names(std::vector<std::string>(names)),
                     rows[0].size());
    for (std::size_t r = 0; r < names.size(); ++r) {
        auto dst = t.row(*t.id_of(names[r]));
        std::copy(rows[r].begin(), rows[r].end(), dst.begin());
    }
    return t;
}

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("split sizes reproduce the published 80/10/10 tables") {
    const struct {
        std::size_t edges, train, val, test;
    } rows[] = {
        {3302, 2641, 330, 331},
        {5241, 4192, 524, 525},
        {8248, 6598, 824, 826},
        {10, 8, 1, 1},
    };
    for (const auto& row : rows) {
        const auto kg = cycle_graph(row.edges, 100);
        for (std::uint64_t seed : {0ULL, 1ULL, 424242ULL}) {
            const EdgeSplit split = split_edges(kg, {0.8, 0.1, 0.1}, seed);
            CHECK(split.train.size() == row.train);
            CHECK(split.validation.size() == row.val);
            CHECK(split.test.size() == row.test);
        }
    }
}

TEST_CASE("split is a disjoint cover, seeded and reproducible") {
    const auto kg = cycle_graph(200, 40);
    const EdgeSplit a = split_edges(kg, {0.8, 0.1, 0.1}, 7);
    const EdgeSplit b = split_edges(kg, {0.8, 0.1, 0.1}, 7);
    CHECK(a.train == b.train);
    CHECK(a.validation == b.validation);
    CHECK(a.test == b.test);

    std::set<Triple> all;
    for (const auto* part : {&a.train, &a.validation, &a.test})
        for (const Triple& t : *part) CHECK(all.insert(t).second);
    CHECK(all.size() == kg.triples().size());

    const EdgeSplit c = split_edges(kg, {0.8, 0.1, 0.1}, 8);
    CHECK(c.train.size() == a.train.size());
    CHECK(std::set<Triple>(c.test.begin(), c.test.end()) !=
          std::set<Triple>(a.test.begin(), a.test.end()));
}

TEST_CASE("split validation errors") {
    const auto kg = cycle_graph(2, 3);
    CHECK_THROWS_AS(split_edges(kg, {0.8, 0.1, 0.1}, 0), ValidationError);
    const auto ok = cycle_graph(30, 10);
    CHECK_THROWS_AS(split_edges(ok, {0.7, 0.1, 0.1}, 0), ValidationError);
    CHECK_THROWS_AS(split_edges(ok, {1.2, -0.1, -0.1}, 0), ValidationError);
}

TEST_CASE("score_triple") {
    const auto emb = table_with({"h", "o", "t"},
                                {{1, 2, 3}, {-2, 1, 0}, {4, 5, 6}});
    CHECK(score_triple(emb, {"h", "p", "h", false}) == doctest::Approx(1.0));
    CHECK(score_triple(emb, {"h", "p", "o", false}) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(score_triple(emb, {"h", "p", "t", false}) ==
          doctest::Approx(0.9746).epsilon(1e-4));
    CHECK_THROWS_WITH_AS(score_triple(emb, {"h", "p", "missing", false}),
                         doctest::Contains("missing"), ValidationError);
    // dot alternative is flag-selectable
    CHECK(score_triple(emb, {"h", "p", "t", false}, ScoreKind::dot) ==
          doctest::Approx(32.0));
}

TEST_CASE("auc basics") {
    CHECK(auc(std::vector<double>{0.9, 0.8}, std::vector<double>{0.7, 0.1}) == 1.0);
    CHECK(auc(std::vector<double>{0.9, 0.4}, std::vector<double>{0.5, 0.1}) == 0.75);
    CHECK(auc(std::vector<double>{0.5}, std::vector<double>{0.5}) == 0.5);
    CHECK_THROWS_AS(auc({}, std::vector<double>{0.1}), ValidationError);
}

TEST_CASE("auc symmetry for tie-free inputs") {
    Rng rng(15);
    for (int iter = 0; iter < 25; ++iter) {
        std::vector<double> pos, neg;
        for (std::size_t i = 0; i < 1 + rng.below(20); ++i)
            pos.push_back(rng.unit() * 2 - 1);
        for (std::size_t i = 0; i < 1 + rng.below(20); ++i)
            neg.push_back(rng.unit() * 2 - 1);
        CHECK(auc(pos, neg) + auc(neg, pos) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("hits@k examples") {
    const std::vector<RankingCase> one{{"a", {"gt"}}};

    SUBCASE("rank 1 everywhere") {
        const std::vector<Ranking> rankings{{"gt", "x", "y"}};
        CHECK(hits_at_k(one, rankings, 1) == 1.0);
    }
    SUBCASE("10 of 19 cases hit at k=1") {
        std::vector<RankingCase> cases;
        std::vector<Ranking> rankings;
        for (int i = 0; i < 19; ++i) {
            cases.push_back({"anchor", {"gt"}});
            rankings.push_back(i < 10 ? Ranking{"gt", "x"} : Ranking{"x", "gt"});
        }
        CHECK(hits_at_k(cases, rankings, 1) == 10.0 / 19.0);
        CHECK(hits_at_k(cases, rankings, 1) == doctest::Approx(0.5263).epsilon(1e-4));
    }
    SUBCASE("ground truth at rank 4") {
        const std::vector<Ranking> rankings{{"x", "y", "z", "gt", "w"}};
        CHECK(hits_at_k(one, rankings, 3) == 0.0);
        CHECK(hits_at_k(one, rankings, 5) == 1.0);
    }
    SUBCASE("empty ranking is an error") {
        const std::vector<Ranking> rankings{{}};
        CHECK_THROWS_AS(hits_at_k(one, rankings, 3), ValidationError);
    }
}

TEST_CASE("hits@k is non-decreasing in k") {
    Rng rng(33);
    for (int iter = 0; iter < 20; ++iter) {
        std::vector<RankingCase> cases;
        std::vector<Ranking> rankings;
        for (std::size_t c = 0; c < 1 + rng.below(6); ++c) {
            RankingCase rc{"anchor" + std::to_string(c), {}};
            Ranking r;
            for (std::size_t i = 0; i < 1 + rng.below(15); ++i)
                r.push_back("c" + std::to_string(i));
            for (std::size_t i = 0; i < 1 + rng.below(4); ++i)
                rc.ground_truth.push_back("c" + std::to_string(rng.below(18)));
            std::sort(rc.ground_truth.begin(), rc.ground_truth.end());
            rc.ground_truth.erase(
                std::unique(rc.ground_truth.begin(), rc.ground_truth.end()),
                rc.ground_truth.end());
            cases.push_back(std::move(rc));
            rankings.push_back(std::move(r));
        }
        double prev = 0.0;
        for (std::size_t k = 1; k <= 16; ++k) {
            const double h = hits_at_k(cases, rankings, k);
            CHECK(h >= prev);
            prev = h;
        }
    }
}

TEST_CASE("mrr examples") {
    std::vector<RankingCase> cases{{"a", {"g1"}}, {"b", {"g2"}}, {"c", {"g3"}}};
    const std::vector<Ranking> rankings{
        {"g1", "x", "y", "z", "w"},
        {"x", "y", "g2", "z", "w"},
        {"x", "y", "z", "w", "g3"},
    };
    CHECK(mrr(cases, rankings) == doctest::Approx(0.5111).epsilon(1e-3));

    const std::vector<Ranking> perfect{{"g1"}, {"g2"}, {"g3"}};
    CHECK(mrr(cases, perfect) == 1.0);

    const std::vector<Ranking> hopeless{{"x"}, {"x"}, {"x"}};
    CHECK(mrr(cases, hopeless) == 0.0);
}

TEST_CASE("ndcg examples") {
    const std::vector<RankingCase> cases{{"a", {"g1", "g2"}}};
    SUBCASE("relevances 1,0,1") {
        const std::vector<Ranking> rankings{{"g1", "x", "g2"}};
        CHECK(ndcg_at_k(cases, rankings, 3) == doctest::Approx(0.9197).epsilon(1e-4));
    }
    SUBCASE("perfect ordering") {
        const std::vector<Ranking> rankings{{"g1", "g2", "x"}};
        CHECK(ndcg_at_k(cases, rankings, 3) == 1.0);
    }
    SUBCASE("no relevant candidates") {
        const std::vector<Ranking> rankings{{"x", "y", "z"}};
        CHECK(ndcg_at_k(cases, rankings, 3) == 0.0);
    }
    SUBCASE("all ground truth in the top ranks gives 1") {
        const std::vector<RankingCase> wide{{"a", {"g1", "g2", "g3"}}};
        const std::vector<Ranking> rankings{{"g2", "g3", "g1", "x", "y"}};
        CHECK(ndcg_at_k(wide, rankings, 10) == 1.0);
    }
}

TEST_CASE("metric oracles agree exactly on 1000 random instances") {
    Rng rng(2024);
    for (int instance = 0; instance < 1000; ++instance) {
        const std::size_t n_cases = 1 + rng.below(10);
        std::vector<RankingCase> cases;
        std::vector<Ranking> rankings;
        for (std::size_t c = 0; c < n_cases; ++c) {
            const std::size_t n_candidates = 1 + rng.below(20);
            Ranking ranking;
            for (std::size_t i = 0; i < n_candidates; ++i)
                ranking.push_back("c" + std::to_string(i));
            rng.shuffle(ranking);
            RankingCase rc{"anchor", {}};
            const std::size_t n_gt = 1 + rng.below(5);
            for (std::size_t i = 0; i < n_gt; ++i)
                rc.ground_truth.push_back("c" + std::to_string(rng.below(24)));
            std::sort(rc.ground_truth.begin(), rc.ground_truth.end());
            rc.ground_truth.erase(
                std::unique(rc.ground_truth.begin(), rc.ground_truth.end()),
                rc.ground_truth.end());
            cases.push_back(std::move(rc));
            rankings.push_back(std::move(ranking));
        }
        const std::size_t k = 1 + rng.below(10);
        CHECK(hits_at_k(cases, rankings, k) == oracle::hits_brute(cases, rankings, k));
        CHECK(mrr(cases, rankings) == oracle::mrr_brute(cases, rankings));
        CHECK(ndcg_at_k(cases, rankings, k) == oracle::ndcg_brute(cases, rankings, k));

        std::vector<double> pos, neg;
        for (std::size_t i = 0; i < 1 + rng.below(15); ++i)
            pos.push_back(static_cast<double>(rng.below(8)) / 4.0);
        for (std::size_t i = 0; i < 1 + rng.below(15); ++i)
            neg.push_back(static_cast<double>(rng.below(8)) / 4.0);
        CHECK(auc(pos, neg) == oracle::auc_brute(pos, neg));
    }
}

TEST_CASE("ranking-case file parsing") {
    std::istringstream in("# header\n1984\tF451,BNW,AF\nX\tY\n");
    const auto cases = parse_ranking_cases(in);
    REQUIRE(cases.size() == 2);
    CHECK(cases[0].anchor == "1984");
    CHECK(cases[0].ground_truth == std::vector<std::string>{"AF", "BNW", "F451"});
    CHECK(cases[1].ground_truth == std::vector<std::string>{"Y"});

    std::istringstream anchor_only("A\t\n");
    CHECK_THROWS_AS(parse_ranking_cases(anchor_only), ParseError);
}

TEST_CASE("evaluate: degenerate identical embeddings give AUC 0.5") {
    const auto kg = cycle_graph(30, 10);
    EdgeSplit split = split_edges(kg, {0.8, 0.1, 0.1}, 3);
    const auto negatives = sample_negatives(kg, split.test, split.test.size(), 5);

    EmbeddingTable emb(Vocabulary::from_names(
                           std::vector<std::string>(kg.entities())),
                       4);
    for (std::uint32_t r = 0; r < emb.size(); ++r) {
        auto row = emb.row(r);
        for (auto& v : row) v = 1.0;
    }
    const std::vector<RankingCase> cases;
    const auto report = evaluate(emb, split, negatives, cases, kg.entities());
    CHECK(report.metrics.at("AUC") == 0.5);

    const std::set<std::string> expected_keys{"AUC",    "Hits@1", "Hits@3",
                                              "Hits@5", "Hits@10", "MRR",
                                              "nDCG@10"};
    std::set<std::string> actual_keys;
    for (const auto& [key, value] : report.metrics) actual_keys.insert(key);
    CHECK(actual_keys == expected_keys);
}

}  // TEST_SUITE
