// kgrec: knowledge-graph embedding and text recommendation toolkit.
//
// Subcommands cover the full pipeline (ingest, synth, split, walk, train,
// concat, eval-lp, eval-rank, recommend, sweep, case-study, stats) plus
// `pipeline` for the end-to-end run. Exit codes: 0 success, 1 validation
// error, 2 runtime error.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "kgrec/error.hpp"
#include "kgrec/evaluation.hpp"
#include "kgrec/graph.hpp"
#include "kgrec/negatives.hpp"
#include "kgrec/pipeline.hpp"
#include "kgrec/records.hpp"
#include "kgrec/recommender.hpp"
#include "kgrec/rng.hpp"
#include "kgrec/skipgram.hpp"
#include "kgrec/synth.hpp"
#include "kgrec/triple.hpp"
#include "kgrec/tuner.hpp"
#include "kgrec/walker.hpp"

namespace fs = std::filesystem;
using namespace kgrec;

namespace {

struct GlobalOptions {
    std::uint64_t seed = 0;
    std::string config_path;
    std::string out_dir = "out";
    bool quiet = false;
};

std::string out_path(const GlobalOptions& g, const std::string& name) {
    fs::create_directories(g.out_dir);
    return (fs::path(g.out_dir) / name).string();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw RuntimeError("cannot write " + path);
    out << content;
}

std::vector<std::string> pool_from(const std::string& pool_path,
                                   const std::string& triples_path) {
    if (!pool_path.empty()) {
        std::ifstream in(pool_path);
        if (!in) throw ValidationError("cannot open pool file: " + pool_path);
        std::vector<std::string> pool;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty() && line.front() != '#') pool.push_back(line);
        }
        std::sort(pool.begin(), pool.end());
        pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
        return pool;
    }
    if (triples_path.empty())
        throw ValidationError("either --pool or --triples is required");
    return KnowledgeGraph(load_triples(triples_path)).text_pool();
}

nlohmann::ordered_json stats_json(const GraphStats& s) {
    return {{"triples_total", s.triples_total},
            {"triples_without_literals", s.triples_entity},
            {"triples_with_literals_only", s.triples_literal},
            {"unique_entities", s.entity_count},
            {"predicates", s.predicate_count},
            {"avg_relationships_per_entity", s.avg_relations_per_entity}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"knowledge-graph embeddings and text recommendation"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--seed", g.seed, "global random seed");
    app.add_option("--config", g.config_path, "JSON config file (pipeline)");
    app.add_option("--out", g.out_dir, "output directory");
    app.add_flag("--quiet", g.quiet, "suppress progress logging");

    // ingest
    auto* cmd_ingest = app.add_subcommand("ingest", "records JSONL -> triple TSV");
    std::string ingest_records_path;
    cmd_ingest->add_option("--records", ingest_records_path, "records file (JSONL)")
        ->required();

    // stats
    auto* cmd_stats = app.add_subcommand("stats", "graph statistics as JSON");
    std::string stats_triples;
    cmd_stats->add_option("--triples", stats_triples, "triple TSV")->required();

    // synth
    auto* cmd_synth = app.add_subcommand("synth", "generate a synthetic KG");
    SynthSpec synth_spec;
    cmd_synth->add_option("--texts", synth_spec.n_texts, "number of texts");
    cmd_synth->add_option("--genres", synth_spec.n_genres, "genre pool size");
    cmd_synth->add_option("--themes", synth_spec.n_themes, "theme pool size");
    cmd_synth->add_option("--subthemes", synth_spec.n_subthemes, "subtheme pool size");
    cmd_synth->add_option("--authors", synth_spec.n_authors, "author pool size");
    cmd_synth->add_option("--clusters", synth_spec.clusters, "planted cluster count");
    cmd_synth->add_option("--share", synth_spec.share_probability,
                          "intra-cluster attribute sharing probability");
    std::vector<std::size_t> synth_genre_range{1, 3}, synth_theme_range{2, 4},
        synth_subtheme_range{1, 3};
    cmd_synth->add_option("--genres-per-text", synth_genre_range, "min max")
        ->expected(2);
    cmd_synth->add_option("--themes-per-text", synth_theme_range, "min max")
        ->expected(2);
    cmd_synth->add_option("--subthemes-per-text", synth_subtheme_range, "min max")
        ->expected(2);

    // split
    auto* cmd_split = app.add_subcommand("split", "80/10/10 edge split");
    std::string split_triples;
    std::vector<double> split_ratios{0.8, 0.1, 0.1};
    cmd_split->add_option("--triples", split_triples, "triple TSV")->required();
    cmd_split->add_option("--ratios", split_ratios, "train val test")->expected(3);

    // walk
    auto* cmd_walk = app.add_subcommand("walk", "generate a walk corpus");
    std::string walk_triples, walk_weights, walk_strategy = "uniform",
                              walk_output = "corpus.txt";
    WalkConfig walk_config;
    cmd_walk->add_option("--triples", walk_triples, "triple TSV")->required();
    cmd_walk->add_option("--strategy", walk_strategy, "uniform|biased|node2vec");
    cmd_walk->add_option("--walk-length", walk_config.walk_length, "max walk length");
    cmd_walk->add_option("--num-walks", walk_config.num_walks, "walks per entity");
    cmd_walk->add_option("--p", walk_config.p, "node2vec return parameter");
    cmd_walk->add_option("--q", walk_config.q, "node2vec in-out parameter");
    cmd_walk->add_option("--weights", walk_weights, "relation weight file (biased)");
    cmd_walk->add_option("--threads", walk_config.threads, "worker threads");
    cmd_walk->add_option("--output", walk_output, "corpus file name");

    // train
    auto* cmd_train = app.add_subcommand("train", "skip-gram training");
    std::string train_corpus, train_output = "embeddings.txt";
    TrainConfig train_config;
    cmd_train->add_option("--corpus", train_corpus, "walk corpus file")->required();
    cmd_train->add_option("--dim", train_config.dimension, "embedding dimension");
    cmd_train->add_option("--window", train_config.window, "context window");
    cmd_train->add_option("--epochs", train_config.epochs, "training epochs");
    cmd_train->add_option("--lr", train_config.learning_rate, "initial learning rate");
    cmd_train->add_option("--negatives", train_config.negatives,
                          "negative samples per pair");
    cmd_train->add_option("--threads", train_config.threads,
                          "worker threads (>1 is non-deterministic)");
    cmd_train->add_option("--output", train_output, "embedding file name");

    // concat
    auto* cmd_concat = app.add_subcommand("concat", "concatenate two embeddings");
    std::string concat_a, concat_b, concat_output = "hybrid.txt";
    cmd_concat->add_option("--first", concat_a, "first embedding file")->required();
    cmd_concat->add_option("--second", concat_b, "second embedding file")->required();
    cmd_concat->add_option("--output", concat_output, "output file name");

    // eval-lp
    auto* cmd_lp = app.add_subcommand("eval-lp", "link-prediction AUC");
    std::string lp_embeddings, lp_test, lp_graph, lp_score = "cosine";
    double lp_ratio = 1.0;
    cmd_lp->add_option("--embeddings", lp_embeddings, "embedding file")->required();
    cmd_lp->add_option("--test", lp_test, "test positives TSV")->required();
    cmd_lp->add_option("--graph", lp_graph, "full positive graph TSV (filter)")
        ->required();
    cmd_lp->add_option("--neg-ratio", lp_ratio, "negatives per positive");
    cmd_lp->add_option("--score", lp_score, "cosine|dot");

    // eval-rank
    auto* cmd_rank = app.add_subcommand("eval-rank", "ranking metrics");
    std::string rank_embeddings, rank_truth, rank_pool, rank_triples,
        rank_score = "cosine";
    cmd_rank->add_option("--embeddings", rank_embeddings, "embedding file")
        ->required();
    cmd_rank->add_option("--truth", rank_truth, "ground-truth file")->required();
    cmd_rank->add_option("--pool", rank_pool, "candidate pool file");
    cmd_rank->add_option("--triples", rank_triples,
                         "triple TSV (pool from isA assertions)");
    cmd_rank->add_option("--score", rank_score, "cosine|dot");

    // recommend
    auto* cmd_rec = app.add_subcommand("recommend", "top-n texts for an anchor");
    std::string rec_embeddings, rec_anchor, rec_pool, rec_triples,
        rec_score = "cosine";
    std::size_t rec_n = 10;
    bool rec_json = false;
    cmd_rec->add_option("--embeddings", rec_embeddings, "embedding file")->required();
    cmd_rec->add_option("--anchor", rec_anchor, "anchor text identifier")->required();
    cmd_rec->add_option("--top-n", rec_n, "recommendations to return");
    cmd_rec->add_option("--pool", rec_pool, "candidate pool file");
    cmd_rec->add_option("--triples", rec_triples,
                        "triple TSV (pool from isA assertions)");
    cmd_rec->add_option("--score", rec_score, "cosine|dot");
    cmd_rec->add_flag("--json", rec_json, "emit JSON instead of TSV");

    // sweep
    auto* cmd_sweep = app.add_subcommand("sweep", "seeded random hyperparameter search");
    std::string sweep_triples, sweep_strategy = "uniform", sweep_weights,
                sweep_space_path;
    std::size_t sweep_trials = 50, sweep_epochs = 1, sweep_negatives = 3;
    double sweep_neg_ratio = 1.0;
    cmd_sweep->add_option("--triples", sweep_triples, "triple TSV")->required();
    cmd_sweep->add_option("--strategy", sweep_strategy, "uniform|biased|node2vec");
    cmd_sweep->add_option("--weights", sweep_weights, "weights file (biased)");
    cmd_sweep->add_option("--trials", sweep_trials, "number of trials");
    cmd_sweep->add_option("--space", sweep_space_path, "search-space JSON file");
    cmd_sweep->add_option("--epochs", sweep_epochs,
                          "training epochs per trial (lean default for search)");
    cmd_sweep->add_option("--negatives", sweep_negatives,
                          "negative samples per pair during trial training");
    cmd_sweep->add_option("--neg-ratio", sweep_neg_ratio,
                          "validation negatives per positive");

    // case-study
    auto* cmd_case = app.add_subcommand("case-study",
                                        "six-configuration fixture report");
    CaseStudyConfig case_config;
    cmd_case->add_option("--triples", case_config.triples_path, "fixture TSV")
        ->required();
    cmd_case->add_option("--truth", case_config.truth_path, "ground-truth file")
        ->required();
    cmd_case
        ->add_option("--weights-default", case_config.default_weights_path,
                     "default weight file")
        ->required();
    cmd_case
        ->add_option("--weights-genre", case_config.genre_weights_path,
                     "genre-emphasized weight file")
        ->required();
    cmd_case->add_option("--anchor", case_config.anchor, "anchor text");
    cmd_case->add_option("--top-n", case_config.top_n, "list depth");

    // pipeline
    auto* cmd_pipe = app.add_subcommand("pipeline", "end-to-end run");
    std::string pipe_triples, pipe_records, pipe_weights, pipe_truth, pipe_pool,
        pipe_strategy;
    cmd_pipe->add_option("--triples", pipe_triples, "triple TSV input");
    cmd_pipe->add_option("--records", pipe_records, "records JSONL input");
    cmd_pipe->add_option("--weights", pipe_weights, "relation weight file");
    cmd_pipe->add_option("--truth", pipe_truth, "ground-truth file");
    cmd_pipe->add_option("--pool", pipe_pool, "candidate pool file");
    cmd_pipe->add_option("--strategy", pipe_strategy,
                         "uniform|biased|node2vec|hybrid");

    try {
        app.parse(argc, argv);

        if (*cmd_ingest) {
            const auto records = load_records(ingest_records_path);
            IngestOptions opts;
            opts.warnings = g.quiet ? nullptr : &std::cerr;
            const auto triples = ingest_records(records, opts);
            const std::string path = out_path(g, "triples.tsv");
            save_triples(path, triples);
            if (!g.quiet)
                std::cerr << "wrote " << triples.size() << " triples to " << path
                          << '\n';
        } else if (*cmd_stats) {
            const KnowledgeGraph kg(load_triples(stats_triples));
            std::cout << stats_json(kg.stats()).dump(2) << '\n';
        } else if (*cmd_synth) {
            synth_spec.genres_per_text = {synth_genre_range[0], synth_genre_range[1]};
            synth_spec.themes_per_text = {synth_theme_range[0], synth_theme_range[1]};
            synth_spec.subthemes_per_text = {synth_subtheme_range[0],
                                             synth_subtheme_range[1]};
            synth_spec.seed = g.seed;
            const SynthResult synth = generate_synthetic_kg(synth_spec);
            save_triples(out_path(g, "synthetic.tsv"), synth.triples);
            save_ground_truth(out_path(g, "synthetic_truth.tsv"), synth.ground_truth);
            write_text_file(out_path(g, "synthetic_pool.txt"), [&] {
                std::string text;
                for (const auto& name : synth.text_names) {
                    text += name;
                    text += '\n';
                }
                return text;
            }());
            if (!g.quiet)
                std::cerr << "wrote " << synth.triples.size() << " triples and "
                          << synth.ground_truth.size() << " ground-truth cases\n";
        } else if (*cmd_split) {
            const KnowledgeGraph kg(load_triples(split_triples));
            const EdgeSplit split = split_edges(
                kg, {split_ratios[0], split_ratios[1], split_ratios[2]}, g.seed);
            save_triples(out_path(g, "train.tsv"), split.train);
            save_triples(out_path(g, "validation.tsv"), split.validation);
            save_triples(out_path(g, "test.tsv"), split.test);
            if (!g.quiet)
                std::cerr << "split " << split.train.size() << '/'
                          << split.validation.size() << '/' << split.test.size()
                          << '\n';
        } else if (*cmd_walk) {
            const KnowledgeGraph kg =
                KnowledgeGraph(load_triples(walk_triples)).without_data_properties();
            walk_config.strategy = parse_strategy(walk_strategy);
            walk_config.seed = g.seed;
            std::optional<RelationWeights> weights;
            if (!walk_weights.empty()) weights = RelationWeights::load(walk_weights);
            const WalkCorpus corpus =
                generate_walks(kg, walk_config, weights ? &*weights : nullptr);
            save_corpus(out_path(g, walk_output), corpus);
            if (!g.quiet)
                std::cerr << "wrote " << corpus.size() << " walks\n";
        } else if (*cmd_train) {
            train_config.seed = g.seed;
            const WalkCorpus corpus = load_corpus(train_corpus);
            const EmbeddingTable table = train_skipgram(corpus, train_config);
            table.save_file(out_path(g, train_output));
            if (!g.quiet)
                std::cerr << "trained " << table.size() << " x " << table.dimension()
                          << " embeddings\n";
        } else if (*cmd_concat) {
            const EmbeddingTable table = concat_embeddings(
                EmbeddingTable::load(concat_a), EmbeddingTable::load(concat_b));
            table.save_file(out_path(g, concat_output));
            if (!g.quiet)
                std::cerr << "hybrid dimension " << table.dimension() << '\n';
        } else if (*cmd_lp) {
            const EmbeddingTable emb = EmbeddingTable::load(lp_embeddings);
            const KnowledgeGraph kg =
                KnowledgeGraph(load_triples(lp_graph)).without_data_properties();
            const auto test = load_triples(lp_test);
            const std::size_t count = std::max<std::size_t>(
                1, static_cast<std::size_t>(lp_ratio * test.size()));
            const NegativeBatch negatives =
                sample_negatives(kg, test, count, derive_stream(g.seed, 106));
            if (!negatives.complete) throw RuntimeError(negatives.error);
            const ScoreKind kind = parse_score_kind(lp_score);
            std::vector<double> pos, neg;
            std::size_t skipped = 0;
            for (const Triple& t : test) {
                if (emb.id_of(t.subject) && emb.id_of(t.object))
                    pos.push_back(score_triple(emb, t, kind));
                else
                    ++skipped;
            }
            for (const CorruptedTriple& c : negatives.negatives)
                if (emb.id_of(c.triple.subject) && emb.id_of(c.triple.object))
                    neg.push_back(score_triple(emb, c.triple, kind));
            nlohmann::ordered_json j{{"AUC", auc(pos, neg)},
                                     {"positives", pos.size()},
                                     {"negatives", neg.size()},
                                     {"skipped", skipped},
                                     {"seed", g.seed}};
            std::cout << j.dump(2) << '\n';
        } else if (*cmd_rank) {
            const EmbeddingTable emb = EmbeddingTable::load(rank_embeddings);
            const auto cases = load_ranking_cases(rank_truth);
            const auto pool = pool_from(rank_pool, rank_triples);
            const ScoreKind kind = parse_score_kind(rank_score);
            std::vector<Ranking> rankings;
            std::vector<RankingCase> usable;
            std::size_t skipped_anchors = 0;
            for (const RankingCase& c : cases) {
                if (!emb.id_of(c.anchor)) {
                    ++skipped_anchors;
                    continue;
                }
                const Recommendation rec =
                    recommend(emb, c.anchor, pool.size(), pool, kind);
                Ranking r;
                for (const auto& [name, score] : rec.items) r.push_back(name);
                rankings.push_back(std::move(r));
                usable.push_back(c);
            }
            if (usable.empty()) throw RuntimeError("no scorable anchors");
            const double scale = static_cast<double>(usable.size()) /
                                 static_cast<double>(cases.size());
            nlohmann::ordered_json j{
                {"Hits@1", hits_at_k(usable, rankings, 1) * scale},
                {"Hits@3", hits_at_k(usable, rankings, 3) * scale},
                {"Hits@5", hits_at_k(usable, rankings, 5) * scale},
                {"Hits@10", hits_at_k(usable, rankings, 10) * scale},
                {"MRR", mrr(usable, rankings) * scale},
                {"nDCG@10", ndcg_at_k(usable, rankings, 10) * scale},
                {"cases", cases.size()},
                {"skipped_anchors", skipped_anchors}};
            std::cout << j.dump(2) << '\n';
        } else if (*cmd_rec) {
            const EmbeddingTable emb = EmbeddingTable::load(rec_embeddings);
            const auto pool = pool_from(rec_pool, rec_triples);
            const Recommendation rec = recommend(emb, rec_anchor, rec_n, pool,
                                                 parse_score_kind(rec_score));
            if (rec_json) {
                auto items = nlohmann::ordered_json::array();
                for (std::size_t i = 0; i < rec.items.size(); ++i)
                    items.push_back({{"rank", i + 1},
                                     {"text", rec.items[i].first},
                                     {"score", rec.items[i].second}});
                std::cout << nlohmann::ordered_json{{"anchor", rec.anchor},
                                                    {"items", items}}
                                 .dump(2)
                          << '\n';
            } else {
                write_recommendation(std::cout, rec);
            }
        } else if (*cmd_sweep) {
            const WalkStrategy strategy = parse_strategy(sweep_strategy);
            const KnowledgeGraph kg =
                KnowledgeGraph(load_triples(sweep_triples)).without_data_properties();
            std::optional<RelationWeights> weights;
            if (strategy == WalkStrategy::biased) {
                if (sweep_weights.empty())
                    throw ValidationError("sweep: strategy=biased requires --weights");
                weights = RelationWeights::load(sweep_weights);
            }
            const SearchSpace space =
                sweep_space_path.empty()
                    ? SearchSpace::default_envelope(strategy == WalkStrategy::node2vec)
                    : SearchSpace::from_json_file(sweep_space_path);

            // Split and the validation negative pool are fixed across trials.
            const EdgeSplit split =
                split_edges(kg, {0.8, 0.1, 0.1}, derive_stream(g.seed, 101));
            const KnowledgeGraph train_graph{std::vector<Triple>(split.train)};
            const std::size_t neg_count = std::max<std::size_t>(
                1, static_cast<std::size_t>(sweep_neg_ratio *
                                            split.validation.size()));
            const NegativeBatch negatives = sample_negatives(
                kg, split.validation, neg_count, derive_stream(g.seed, 106));
            if (!negatives.complete) throw RuntimeError(negatives.error);

            TrainConfig train_defaults;
            train_defaults.epochs = sweep_epochs;
            train_defaults.negatives = sweep_negatives;
            const Objective objective = make_validation_objective(
                train_graph, split.validation, negatives, strategy,
                weights ? &*weights : nullptr, train_defaults);

            const SearchResult result =
                random_search(space, sweep_trials, objective, g.seed);
            write_text_file(out_path(g, "trials.jsonl"),
                            trial_log_json(result.trials));
            nlohmann::ordered_json best{
                {"config",
                 nlohmann::ordered_json::parse(trial_config_json(result.best_config))},
                {"auc", result.best_auc},
                {"trial", result.best_index},
                {"seed", g.seed}};
            write_text_file(out_path(g, "best_config.json"), best.dump(2) + "\n");
            std::cout << best.dump(2) << '\n';
        } else if (*cmd_case) {
            if (app.count("--seed") > 0) case_config.seed = g.seed;
            const CaseStudyReport report = case_fixture_report(case_config);
            write_text_file(out_path(g, "case_study.json"),
                            report.to_json_string() + "\n");
            std::cout << report.to_table();
        } else if (*cmd_pipe) {
            PipelineConfig config;
            if (!g.config_path.empty())
                config = PipelineConfig::from_json_file(g.config_path);
            if (!pipe_triples.empty()) config.triples_path = pipe_triples;
            if (!pipe_records.empty()) config.records_path = pipe_records;
            if (!pipe_weights.empty()) config.weights_path = pipe_weights;
            if (!pipe_truth.empty()) config.truth_path = pipe_truth;
            if (!pipe_pool.empty()) config.pool_path = pipe_pool;
            if (!pipe_strategy.empty())
                config.strategy = parse_pipeline_strategy(pipe_strategy);
            if (app.count("--out") > 0) config.out_dir = g.out_dir;
            if (app.count("--seed") > 0) config.seed = g.seed;
            if (g.quiet) config.quiet = true;
            const PipelineResult result = run_pipeline(config);
            std::cout << result.report.to_json_string() << '\n';
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
