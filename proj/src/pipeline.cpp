#include "kgrec/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "kgrec/error.hpp"
#include "kgrec/negatives.hpp"
#include "kgrec/records.hpp"
#include "kgrec/recommender.hpp"
#include "kgrec/rng.hpp"

namespace fs = std::filesystem;

namespace kgrec {

PipelineStrategy parse_pipeline_strategy(std::string_view name) {
    if (name == "uniform" || name == "deepwalk") return PipelineStrategy::uniform;
    if (name == "biased") return PipelineStrategy::biased;
    if (name == "node2vec") return PipelineStrategy::node2vec;
    if (name == "hybrid") return PipelineStrategy::hybrid;
    throw ValidationError("unknown pipeline strategy: " + std::string(name));
}

const char* pipeline_strategy_name(PipelineStrategy strategy) {
    switch (strategy) {
        case PipelineStrategy::uniform: return "uniform";
        case PipelineStrategy::biased: return "biased";
        case PipelineStrategy::node2vec: return "node2vec";
        case PipelineStrategy::hybrid: return "hybrid";
    }
    return "?";
}

void PipelineConfig::validate() const {
    if (triples_path.empty() == records_path.empty())
        throw ValidationError(
            "pipeline: exactly one of triples/records input is required");
    const auto check_exists = [](const std::string& path, const char* what) {
        if (!path.empty() && !fs::exists(path))
            throw ValidationError(std::string(what) + " not found: " + path);
    };
    check_exists(triples_path, "triples file");
    check_exists(records_path, "records file");
    check_exists(truth_path, "ground-truth file");
    check_exists(pool_path, "pool file");
    if (strategy == PipelineStrategy::biased || strategy == PipelineStrategy::hybrid) {
        if (weights_path.empty())
            throw ValidationError("pipeline: strategy '" +
                                  std::string(pipeline_strategy_name(strategy)) +
                                  "' requires a weights file");
        check_exists(weights_path, "weights file");
    }
    const double sum = split_ratios[0] + split_ratios[1] + split_ratios[2];
    if (std::abs(sum - 1.0) > 1e-9)
        throw ValidationError("pipeline: split ratios must sum to 1");
    if (negative_ratio <= 0.0)
        throw ValidationError("pipeline: negative ratio must be positive");
    if (top_n < 1) throw ValidationError("pipeline: top_n must be >= 1");
    walk.validate();
    train.validate();
}

PipelineConfig PipelineConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("bad config JSON: " + std::string(e.what()));
    }

    PipelineConfig c;
    c.triples_path = j.value("triples", "");
    c.records_path = j.value("records", "");
    c.weights_path = j.value("weights", "");
    c.truth_path = j.value("truth", "");
    c.pool_path = j.value("pool", "");
    c.out_dir = j.value("out", c.out_dir);
    if (j.contains("strategy"))
        c.strategy = parse_pipeline_strategy(j.at("strategy").get<std::string>());
    if (j.contains("walk")) {
        const auto& w = j.at("walk");
        c.walk.walk_length = w.value("length", c.walk.walk_length);
        c.walk.num_walks = w.value("num_walks", c.walk.num_walks);
        c.walk.p = w.value("p", c.walk.p);
        c.walk.q = w.value("q", c.walk.q);
        c.walk.threads = w.value("threads", c.walk.threads);
    }
    if (j.contains("train")) {
        const auto& t = j.at("train");
        c.train.dimension = t.value("dimension", c.train.dimension);
        c.train.window = t.value("window", c.train.window);
        c.train.epochs = t.value("epochs", c.train.epochs);
        c.train.learning_rate = t.value("learning_rate", c.train.learning_rate);
        c.train.negatives = t.value("negatives", c.train.negatives);
        c.train.threads = t.value("threads", c.train.threads);
    }
    if (j.contains("split")) {
        const auto& s = j.at("split");
        if (!s.is_array() || s.size() != 3)
            throw ValidationError("config: split must be a list of 3 ratios");
        for (std::size_t i = 0; i < 3; ++i) c.split_ratios[i] = s[i].get<double>();
    }
    c.negative_ratio = j.value("negative_ratio", c.negative_ratio);
    if (j.contains("score"))
        c.score = parse_score_kind(j.at("score").get<std::string>());
    c.top_n = j.value("top_n", c.top_n);
    c.seed = j.value("seed", c.seed);
    c.quiet = j.value("quiet", c.quiet);
    c.dataset_label = j.value("dataset", c.dataset_label);
    return c;
}

namespace {

template <typename Fn>
auto run_stage(const std::string& name, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        throw RuntimeError("stage " + name + ": " + e.what());
    }
}

// Writes through a ".partial" path and renames on success, so a failed stage
// leaves only suffixed files behind.
template <typename Fn>
std::string write_artifact(const std::string& dir, const std::string& name, Fn&& fn) {
    const fs::path final_path = fs::path(dir) / name;
    fs::path partial = final_path;
    partial += ".partial";
    {
        std::ofstream out(partial);
        if (!out) throw RuntimeError("cannot write " + partial.string());
        fn(out);
        if (!out) throw RuntimeError("write failed: " + partial.string());
    }
    fs::rename(partial, final_path);
    return final_path.string();
}

std::vector<std::string> load_pool_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open pool file: " + path);
    std::vector<std::string> pool;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        pool.push_back(line);
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    return pool;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
    config.validate();
    fs::create_directories(config.out_dir);

    PipelineResult result;
    std::ostream* log = config.quiet ? nullptr : &std::clog;
    const auto note = [&](const std::string& message) {
        if (log) *log << "[pipeline] " << message << '\n';
    };

    // ingest
    KnowledgeGraph full_graph = run_stage("ingest", [&] {
        std::vector<Triple> triples;
        if (!config.records_path.empty()) {
            const auto records = load_records(config.records_path);
            IngestOptions opts;
            opts.warnings = config.quiet ? nullptr : &std::clog;
            triples = ingest_records(records, opts);
            result.artifacts["triples"] = write_artifact(
                config.out_dir, "triples.tsv",
                [&](std::ostream& out) { write_triples(out, triples); });
        } else {
            triples = load_triples(config.triples_path);
        }
        return KnowledgeGraph(std::move(triples));
    });
    note("ingested " + std::to_string(full_graph.triples().size()) + " triples");

    // strip
    const KnowledgeGraph graph = run_stage(
        "strip", [&] { return full_graph.without_data_properties(); });

    // split
    const EdgeSplit split = run_stage("split", [&] {
        EdgeSplit s = split_edges(graph, config.split_ratios,
                                  derive_stream(config.seed, stage_seed::split));
        result.artifacts["train"] = write_artifact(
            config.out_dir, "train.tsv",
            [&](std::ostream& out) { write_triples(out, s.train); });
        result.artifacts["validation"] = write_artifact(
            config.out_dir, "validation.tsv",
            [&](std::ostream& out) { write_triples(out, s.validation); });
        result.artifacts["test"] = write_artifact(
            config.out_dir, "test.tsv",
            [&](std::ostream& out) { write_triples(out, s.test); });
        return s;
    });
    note("split " + std::to_string(split.train.size()) + "/" +
         std::to_string(split.validation.size()) + "/" +
         std::to_string(split.test.size()));

    const KnowledgeGraph train_graph =
        run_stage("split", [&] { return KnowledgeGraph(split.train); });

    // walk
    const bool wants_uniform = config.strategy == PipelineStrategy::uniform ||
                               config.strategy == PipelineStrategy::hybrid;
    const bool wants_biased = config.strategy == PipelineStrategy::biased ||
                              config.strategy == PipelineStrategy::hybrid;
    const bool wants_node2vec = config.strategy == PipelineStrategy::node2vec;

    WalkCorpus corpus_first;   // uniform or node2vec
    WalkCorpus corpus_biased;
    run_stage("walk", [&] {
        if (wants_uniform || wants_node2vec) {
            WalkConfig wc = config.walk;
            wc.strategy =
                wants_node2vec ? WalkStrategy::node2vec : WalkStrategy::uniform;
            wc.seed = derive_stream(config.seed, stage_seed::walk_primary);
            corpus_first = generate_walks(train_graph, wc);
            const char* name = config.strategy == PipelineStrategy::hybrid
                                   ? "corpus_uniform.txt"
                                   : "corpus.txt";
            result.artifacts[name] = write_artifact(
                config.out_dir, name,
                [&](std::ostream& out) { write_corpus(out, corpus_first); });
        }
        if (wants_biased) {
            const RelationWeights weights = RelationWeights::load(config.weights_path);
            WalkConfig wc = config.walk;
            wc.strategy = WalkStrategy::biased;
            wc.seed = derive_stream(config.seed, stage_seed::walk_biased);
            corpus_biased = generate_walks(train_graph, wc, &weights);
            const char* name = config.strategy == PipelineStrategy::hybrid
                                   ? "corpus_biased.txt"
                                   : "corpus.txt";
            result.artifacts[name] = write_artifact(
                config.out_dir, name,
                [&](std::ostream& out) { write_corpus(out, corpus_biased); });
        }
        return 0;
    });
    note("walk corpora generated");

    // train (and concat for hybrid)
    const EmbeddingTable embeddings = run_stage("train", [&] {
        EmbeddingTable table;
        if (config.strategy == PipelineStrategy::hybrid) {
            TrainConfig tc = config.train;
            tc.seed = derive_stream(config.seed, stage_seed::train_primary);
            EmbeddingTable uniform_table = train_skipgram(corpus_first, tc);
            tc.seed = derive_stream(config.seed, stage_seed::train_biased);
            EmbeddingTable biased_table = train_skipgram(corpus_biased, tc);
            uniform_table.save_file(
                (fs::path(config.out_dir) / "embeddings_uniform.txt").string());
            biased_table.save_file(
                (fs::path(config.out_dir) / "embeddings_biased.txt").string());
            result.artifacts["embeddings_uniform"] =
                (fs::path(config.out_dir) / "embeddings_uniform.txt").string();
            result.artifacts["embeddings_biased"] =
                (fs::path(config.out_dir) / "embeddings_biased.txt").string();
            table = concat_embeddings(uniform_table, biased_table);
        } else {
            TrainConfig tc = config.train;
            tc.seed = derive_stream(config.seed, stage_seed::train_primary);
            table = train_skipgram(
                wants_biased ? corpus_biased : corpus_first, tc);
        }
        result.artifacts["embeddings"] = write_artifact(
            config.out_dir, "embeddings.txt",
            [&](std::ostream& out) { table.save(out); });
        return table;
    });
    note("embeddings trained (" + std::to_string(embeddings.size()) + " x " +
         std::to_string(embeddings.dimension()) + ")");

    // negatives (sources: test split; filter: all entity-valued triples)
    const NegativeBatch negatives = run_stage("negatives", [&] {
        const std::size_t count = std::max<std::size_t>(
            1, static_cast<std::size_t>(
                   std::llround(config.negative_ratio *
                                static_cast<double>(split.test.size()))));
        NegativeBatch batch =
            sample_negatives(graph, split.test, count,
                             derive_stream(config.seed, stage_seed::negatives));
        if (!batch.complete) throw RuntimeError(batch.error);
        result.artifacts["negatives"] = write_artifact(
            config.out_dir, "negatives.tsv",
            [&](std::ostream& out) { write_negatives(out, batch); });
        return batch;
    });

    // evaluate
    std::vector<RankingCase> cases;
    std::vector<std::string> pool;
    run_stage("evaluate", [&] {
        if (!config.truth_path.empty()) cases = load_ranking_cases(config.truth_path);
        pool = config.pool_path.empty() ? graph.text_pool()
                                        : load_pool_file(config.pool_path);
        result.report = evaluate(embeddings, split, negatives, cases, pool,
                                 config.score);
        result.report.model = pipeline_strategy_name(config.strategy);
        result.report.dataset =
            !config.dataset_label.empty()
                ? config.dataset_label
                : fs::path(config.records_path.empty() ? config.triples_path
                                                       : config.records_path)
                      .filename()
                      .string();
        result.report.weight_config =
            config.weights_path.empty()
                ? "none"
                : fs::path(config.weights_path).filename().string();
        result.report.seed = config.seed;
        result.artifacts["report"] = write_artifact(
            config.out_dir, "report.json",
            [&](std::ostream& out) { out << result.report.to_json_string() << '\n'; });
        result.artifacts["report_csv"] = write_artifact(
            config.out_dir, "report.csv", [&](std::ostream& out) {
                out << EvalReport::csv_header() << '\n'
                    << result.report.to_csv_row() << '\n';
            });
        return 0;
    });

    // recommend
    run_stage("recommend", [&] {
        std::vector<std::string> anchors;
        if (!cases.empty())
            for (const RankingCase& c : cases) anchors.push_back(c.anchor);
        else
            anchors = pool;
        result.artifacts["recommendations"] = write_artifact(
            config.out_dir, "recommendations.tsv", [&](std::ostream& out) {
                for (const std::string& anchor : anchors) {
                    if (!embeddings.id_of(anchor)) continue;
                    out << "# anchor: " << anchor << '\n';
                    write_recommendation(
                        out, recommend(embeddings, anchor, config.top_n, pool,
                                       config.score));
                }
            });
        return 0;
    });
    note("done; report at " + result.artifacts["report"]);
    return result;
}

Objective make_validation_objective(const KnowledgeGraph& train_graph,
                                    const std::vector<Triple>& validation,
                                    const NegativeBatch& negatives,
                                    WalkStrategy strategy,
                                    const RelationWeights* weights,
                                    const TrainConfig& train_defaults,
                                    ScoreKind kind) {
    return [&train_graph, &validation, &negatives, strategy, weights,
            train_defaults, kind](const TrialConfig& config,
                                  std::uint64_t trial_seed) {
        WalkConfig wc;
        wc.strategy = strategy;
        wc.walk_length = static_cast<std::size_t>(config.at("walk_length"));
        wc.num_walks = static_cast<std::size_t>(config.at("num_walks"));
        if (strategy == WalkStrategy::node2vec) {
            wc.p = config.at("p");
            wc.q = config.at("q");
        }
        wc.seed = derive_stream(trial_seed, 1);
        const WalkCorpus corpus = generate_walks(train_graph, wc, weights);

        TrainConfig tc = train_defaults;
        tc.dimension = static_cast<std::size_t>(config.at("dimension"));
        tc.window = static_cast<std::size_t>(config.at("window"));
        tc.seed = derive_stream(trial_seed, 2);
        const EmbeddingTable emb = train_skipgram(corpus, tc);

        std::vector<double> pos, neg;
        for (const Triple& t : validation)
            if (emb.id_of(t.subject) && emb.id_of(t.object))
                pos.push_back(score_triple(emb, t, kind));
        for (const CorruptedTriple& c : negatives.negatives)
            if (emb.id_of(c.triple.subject) && emb.id_of(c.triple.object))
                neg.push_back(score_triple(emb, c.triple, kind));
        return auc(pos, neg);
    };
}

namespace {

struct NamedTable {
    std::string name;
    const EmbeddingTable* table;
};

}  // namespace

CaseStudyReport case_fixture_report(const CaseStudyConfig& config) {
    const KnowledgeGraph graph =
        KnowledgeGraph(load_triples(config.triples_path)).without_data_properties();
    const auto cases = load_ranking_cases(config.truth_path);
    const auto anchor_case =
        std::find_if(cases.begin(), cases.end(),
                     [&](const RankingCase& c) { return c.anchor == config.anchor; });
    if (anchor_case == cases.end())
        throw ValidationError("anchor '" + config.anchor +
                              "' not present in the ground-truth file");
    const std::vector<std::string> pool = graph.text_pool();

    const RelationWeights weights_default =
        RelationWeights::load(config.default_weights_path);
    const RelationWeights weights_genre =
        RelationWeights::load(config.genre_weights_path);

    WalkConfig wc;
    wc.walk_length = config.walk_length;
    wc.num_walks = config.num_walks;
    TrainConfig tc;
    tc.dimension = config.dimension;
    tc.window = config.window;
    tc.epochs = config.epochs;

    const auto make_corpus = [&](WalkStrategy strategy, std::uint64_t salt,
                                 const RelationWeights* w) {
        WalkConfig c = wc;
        c.strategy = strategy;
        c.p = config.p;
        c.q = config.q;
        c.seed = derive_stream(config.seed, salt);
        return generate_walks(graph, c, w);
    };
    const auto train = [&](const WalkCorpus& corpus, std::uint64_t salt) {
        TrainConfig c = tc;
        c.seed = derive_stream(config.seed, salt);
        return train_skipgram(corpus, c);
    };

    const EmbeddingTable emb_uniform =
        train(make_corpus(WalkStrategy::uniform, 1, nullptr), 5);
    const EmbeddingTable emb_node2vec =
        train(make_corpus(WalkStrategy::node2vec, 2, nullptr), 6);
    const EmbeddingTable emb_biased_default =
        train(make_corpus(WalkStrategy::biased, 3, &weights_default), 7);
    const EmbeddingTable emb_biased_genre =
        train(make_corpus(WalkStrategy::biased, 4, &weights_genre), 8);
    const EmbeddingTable emb_hybrid_default =
        concat_embeddings(emb_uniform, emb_biased_default);
    const EmbeddingTable emb_hybrid_genre =
        concat_embeddings(emb_uniform, emb_biased_genre);

    CaseStudyReport report;
    report.anchor = config.anchor;
    report.ground_truth = anchor_case->ground_truth;

    const NamedTable tables[] = {
        {"uniform", &emb_uniform},
        {"node2vec", &emb_node2vec},
        {"biased-default", &emb_biased_default},
        {"biased-genre", &emb_biased_genre},
        {"hybrid-default", &emb_hybrid_default},
        {"hybrid-genre", &emb_hybrid_genre},
    };
    for (const NamedTable& entry : tables) {
        const Recommendation rec =
            recommend(*entry.table, config.anchor, config.top_n, pool);
        CaseConfigurationResult r;
        r.name = entry.name;
        r.top = rec.items;
        for (const auto& [name, score] : rec.items)
            if (std::binary_search(anchor_case->ground_truth.begin(),
                                   anchor_case->ground_truth.end(), name))
                ++r.case_recall;
        report.configurations.push_back(std::move(r));
    }
    return report;
}

std::string CaseStudyReport::to_json_string(int indent) const {
    nlohmann::ordered_json j;
    j["anchor"] = anchor;
    j["ground_truth"] = ground_truth;
    auto configs = nlohmann::ordered_json::array();
    for (const CaseConfigurationResult& c : configurations) {
        nlohmann::ordered_json jc;
        jc["name"] = c.name;
        auto top = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < c.top.size(); ++i)
            top.push_back({{"rank", i + 1},
                           {"text", c.top[i].first},
                           {"score", c.top[i].second}});
        jc["top"] = top;
        jc["case_recall"] = c.case_recall;
        jc["case_recall_out_of"] = ground_truth.size();
        configs.push_back(std::move(jc));
    }
    j["configurations"] = configs;
    return j.dump(indent);
}

std::string CaseStudyReport::to_table() const {
    std::ostringstream out;
    out << "Anchor: " << anchor << "\nGround truth:";
    for (const auto& g : ground_truth) out << ' ' << g;
    out << "\n";

    const auto emit_half = [&](const char* title, std::size_t first,
                               std::size_t last) {
        out << '\n' << title << '\n';
        std::size_t depth = 0;
        out << std::left << std::setw(6) << "Rank";
        for (std::size_t c = first; c < last; ++c) {
            out << std::setw(38) << configurations[c].name;
            depth = std::max(depth, configurations[c].top.size());
        }
        out << '\n';
        for (std::size_t r = 0; r < depth; ++r) {
            out << std::setw(6) << (r + 1);
            for (std::size_t c = first; c < last; ++c) {
                const auto& top = configurations[c].top;
                out << std::setw(38) << (r < top.size() ? top[r].first : "");
            }
            out << '\n';
        }
        out << std::setw(6) << "Hits";
        for (std::size_t c = first; c < last; ++c)
            out << std::setw(38)
                << (std::to_string(configurations[c].case_recall) + " / " +
                    std::to_string(ground_truth.size()));
        out << '\n';
    };
    emit_half("(a) default-weight configurations", 0, 3);
    emit_half("(b) genre-emphasized and hybrid configurations", 3,
              configurations.size());
    return out.str();
}

}  // namespace kgrec
