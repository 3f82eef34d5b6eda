// Python bindings for the core operations: graph loading and stats, walk
// generation, skip-gram training, ranking metrics, negative sampling, the
// recommender, the synthetic-KG generator, and the end-to-end pipeline.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "kgrec/error.hpp"
#include "kgrec/evaluation.hpp"
#include "kgrec/graph.hpp"
#include "kgrec/negatives.hpp"
#include "kgrec/pipeline.hpp"
#include "kgrec/records.hpp"
#include "kgrec/recommender.hpp"
#include "kgrec/skipgram.hpp"
#include "kgrec/synth.hpp"
#include "kgrec/triple.hpp"
#include "kgrec/walker.hpp"

namespace py = pybind11;
using namespace kgrec;

namespace {

using PyTriple = std::tuple<std::string, std::string, std::string, bool>;

std::vector<Triple> triples_from_py(const std::vector<PyTriple>& items) {
    std::vector<Triple> triples;
    triples.reserve(items.size());
    for (const auto& [s, p, o, lit] : items) triples.push_back({s, p, o, lit});
    return triples;
}

std::vector<PyTriple> triples_to_py(const std::vector<Triple>& triples) {
    std::vector<PyTriple> items;
    items.reserve(triples.size());
    for (const Triple& t : triples)
        items.emplace_back(t.subject, t.predicate, t.object, t.is_data_property);
    return items;
}

std::vector<RankingCase> cases_from_py(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& raw) {
    std::vector<RankingCase> cases;
    for (const auto& [anchor, gt] : raw) {
        RankingCase c{anchor, gt};
        std::sort(c.ground_truth.begin(), c.ground_truth.end());
        c.ground_truth.erase(
            std::unique(c.ground_truth.begin(), c.ground_truth.end()),
            c.ground_truth.end());
        cases.push_back(std::move(c));
    }
    return cases;
}

WalkCorpus generate_walks_py(const KnowledgeGraph& kg, const std::string& strategy,
                             std::size_t walk_length, std::size_t num_walks,
                             double p, double q, std::uint64_t seed,
                             const std::optional<std::map<std::string, double>>&
                                 relation_weights,
                             unsigned threads) {
    WalkConfig config;
    config.strategy = parse_strategy(strategy);
    config.walk_length = walk_length;
    config.num_walks = num_walks;
    config.p = p;
    config.q = q;
    config.seed = seed;
    config.threads = threads;
    std::optional<RelationWeights> weights;
    if (relation_weights) weights.emplace(*relation_weights);
    return generate_walks(kg, config, weights ? &*weights : nullptr);
}

EmbeddingTable train_py(const WalkCorpus& corpus, std::size_t dimension,
                        std::size_t window, std::size_t epochs,
                        double learning_rate, std::size_t negatives,
                        std::uint64_t seed, unsigned threads) {
    TrainConfig config;
    config.dimension = dimension;
    config.window = window;
    config.epochs = epochs;
    config.learning_rate = learning_rate;
    config.negatives = negatives;
    config.seed = seed;
    config.threads = threads;
    return train_skipgram(corpus, config);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "knowledge-graph embeddings and text recommendation";

    py::register_exception<ValidationError>(m, "ValidationError",
                                            PyExc_ValueError);
    py::register_exception<RuntimeError>(m, "RuntimeError", PyExc_RuntimeError);

    py::class_<GraphStats>(m, "GraphStats")
        .def_readonly("triples_total", &GraphStats::triples_total)
        .def_readonly("triples_entity", &GraphStats::triples_entity)
        .def_readonly("triples_literal", &GraphStats::triples_literal)
        .def_readonly("entity_count", &GraphStats::entity_count)
        .def_readonly("predicate_count", &GraphStats::predicate_count)
        .def_readonly("avg_relations_per_entity",
                      &GraphStats::avg_relations_per_entity);

    py::class_<KnowledgeGraph>(m, "KnowledgeGraph")
        .def(py::init([](const std::vector<PyTriple>& triples) {
                 return KnowledgeGraph(triples_from_py(triples));
             }),
             py::arg("triples"))
        .def_static("load", [](const std::string& path) {
            return KnowledgeGraph(load_triples(path));
        })
        .def_property_readonly("entities", &KnowledgeGraph::entities)
        .def_property_readonly("predicates", &KnowledgeGraph::predicates)
        .def_property_readonly(
            "triples",
            [](const KnowledgeGraph& kg) { return triples_to_py(kg.triples()); })
        .def("stats", &KnowledgeGraph::stats)
        .def("without_data_properties", &KnowledgeGraph::without_data_properties)
        .def("text_pool", &KnowledgeGraph::text_pool)
        .def("save", [](const KnowledgeGraph& kg, const std::string& path) {
            save_triples(path, kg.triples());
        })
        .def("__len__",
             [](const KnowledgeGraph& kg) { return kg.triples().size(); });

    py::class_<EmbeddingTable>(m, "EmbeddingTable")
        .def_property_readonly("dimension", &EmbeddingTable::dimension)
        .def_property_readonly(
            "names",
            [](const EmbeddingTable& t) { return t.vocab().names; })
        .def("row",
             [](const EmbeddingTable& t, const std::string& entity) {
                 const auto row = t.row(entity);
                 return std::vector<double>(row.begin(), row.end());
             })
        .def("slice", &EmbeddingTable::slice, py::arg("offset"), py::arg("width"))
        .def("save", &EmbeddingTable::save_file)
        .def_static("load", &EmbeddingTable::load)
        .def("__len__", &EmbeddingTable::size);

    m.def("apply_era_rule", &apply_era_rule, py::arg("year"));
    m.def(
        "apply_complexity_rule",
        [](int lexile, const std::map<std::string, std::string>& qualitative)
            -> std::optional<std::string> {
            return apply_complexity_rule(lexile, qualitative);
        },
        py::arg("lexile"), py::arg("qualitative") = std::map<std::string, std::string>{});

    m.def("generate_walks", &generate_walks_py, py::arg("graph"),
          py::arg("strategy") = "uniform", py::arg("walk_length") = 80,
          py::arg("num_walks") = 10, py::arg("p") = 1.0, py::arg("q") = 1.0,
          py::arg("seed") = 0, py::arg("relation_weights") = std::nullopt,
          py::arg("threads") = 1);

    m.def("train_skipgram", &train_py, py::arg("corpus"),
          py::arg("dimension") = 128, py::arg("window") = 5,
          py::arg("epochs") = 5, py::arg("learning_rate") = 0.025,
          py::arg("negatives") = 5, py::arg("seed") = 0, py::arg("threads") = 1);

    m.def("concat_embeddings", &concat_embeddings, py::arg("first"),
          py::arg("second"));

    m.def(
        "cosine",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            return cosine(a, b);
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "recommend",
        [](const EmbeddingTable& emb, const std::string& anchor, std::size_t n,
           const std::vector<std::string>& pool, const std::string& score) {
            const auto rec =
                recommend(emb, anchor, n, pool, parse_score_kind(score));
            return rec.items;
        },
        py::arg("embeddings"), py::arg("anchor"), py::arg("n"), py::arg("pool"),
        py::arg("score") = "cosine");

    m.def(
        "split_edges",
        [](const KnowledgeGraph& kg, const std::array<double, 3>& ratios,
           std::uint64_t seed) {
            const EdgeSplit split = split_edges(kg, ratios, seed);
            py::dict out;
            out["train"] = triples_to_py(split.train);
            out["validation"] = triples_to_py(split.validation);
            out["test"] = triples_to_py(split.test);
            return out;
        },
        py::arg("graph"), py::arg("ratios") = std::array<double, 3>{0.8, 0.1, 0.1},
        py::arg("seed") = 0);

    m.def(
        "sample_negatives",
        [](const KnowledgeGraph& kg, std::size_t count, std::uint64_t seed,
           bool type_aware) {
            NegativeOptions options;
            options.type_aware = type_aware;
            const auto batch =
                sample_negatives(kg, kg.triples(), count, seed, options);
            if (!batch.complete) throw RuntimeError(batch.error);
            std::vector<PyTriple> out;
            for (const CorruptedTriple& c : batch.negatives)
                out.emplace_back(c.triple.subject, c.triple.predicate,
                                 c.triple.object, false);
            return out;
        },
        py::arg("graph"), py::arg("count"), py::arg("seed") = 0,
        py::arg("type_aware") = false);

    m.def(
        "auc",
        [](const std::vector<double>& pos, const std::vector<double>& neg) {
            return auc(pos, neg);
        },
        py::arg("positive_scores"), py::arg("negative_scores"));

    m.def(
        "hits_at_k",
        [](const std::vector<std::pair<std::string, std::vector<std::string>>>& cases,
           const std::vector<Ranking>& rankings, std::size_t k) {
            return hits_at_k(cases_from_py(cases), rankings, k);
        },
        py::arg("cases"), py::arg("rankings"), py::arg("k"));
    m.def(
        "mrr",
        [](const std::vector<std::pair<std::string, std::vector<std::string>>>& cases,
           const std::vector<Ranking>& rankings) {
            return mrr(cases_from_py(cases), rankings);
        },
        py::arg("cases"), py::arg("rankings"));
    m.def(
        "ndcg_at_k",
        [](const std::vector<std::pair<std::string, std::vector<std::string>>>& cases,
           const std::vector<Ranking>& rankings, std::size_t k) {
            return ndcg_at_k(cases_from_py(cases), rankings, k);
        },
        py::arg("cases"), py::arg("rankings"), py::arg("k"));

    m.def(
        "generate_synthetic_kg",
        [](std::size_t n_texts, std::size_t clusters, double share_probability,
           std::uint64_t seed) {
            SynthSpec spec;
            spec.n_texts = n_texts;
            spec.clusters = clusters;
            spec.share_probability = share_probability;
            spec.seed = seed;
            const auto result = generate_synthetic_kg(spec);
            py::dict out;
            out["triples"] = triples_to_py(result.triples);
            py::dict truth;
            for (const RankingCase& c : result.ground_truth)
                truth[py::str(c.anchor)] = c.ground_truth;
            out["ground_truth"] = truth;
            return out;
        },
        py::arg("n_texts") = 100, py::arg("clusters") = 4,
        py::arg("share_probability") = 0.9, py::arg("seed") = 0);

    m.def(
        "run_pipeline",
        [](const std::string& config_path) {
            const auto result =
                run_pipeline(PipelineConfig::from_json_file(config_path));
            py::dict out;
            py::dict metrics;
            for (const auto& [key, value] : result.report.metrics)
                metrics[py::str(key)] = value;
            out["metrics"] = metrics;
            py::dict artifacts;
            for (const auto& [name, path] : result.artifacts)
                artifacts[py::str(name)] = path;
            out["artifacts"] = artifacts;
            return out;
        },
        py::arg("config_path"));
}
