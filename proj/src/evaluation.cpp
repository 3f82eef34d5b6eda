#include "kgrec/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <sstream>
#include <unordered_set>

#include "kgrec/error.hpp"
#include "kgrec/recommender.hpp"
#include "kgrec/rng.hpp"

namespace kgrec {

EdgeSplit split_edges(const KnowledgeGraph& kg,
                      const std::array<double, 3>& ratios, std::uint64_t seed) {
    const double sum = ratios[0] + ratios[1] + ratios[2];
    if (std::abs(sum - 1.0) > 1e-9)
        throw ValidationError("split ratios must sum to 1");
    for (double r : ratios)
        if (r < 0.0 || r > 1.0)
            throw ValidationError("split ratios must lie in [0, 1]");

    std::vector<const Triple*> edges;
    for (const Triple& t : kg.triples())
        if (!t.is_data_property) edges.push_back(&t);
    if (edges.size() < 3)
        throw ValidationError("need at least 3 entity-valued triples to split");

    Rng rng(seed);
    rng.shuffle(edges);

    const std::size_t n = edges.size();
    const std::size_t n_train = static_cast<std::size_t>(
        std::floor(ratios[0] * static_cast<double>(n)));
    const std::size_t n_val = static_cast<std::size_t>(
        std::floor(ratios[1] * static_cast<double>(n)));

    EdgeSplit split;
    for (std::size_t i = 0; i < n; ++i) {
        const Triple& t = *edges[i];
        if (i < n_train)
            split.train.push_back(t);
        else if (i < n_train + n_val)
            split.validation.push_back(t);
        else
            split.test.push_back(t);
    }
    return split;
}

ScoreKind parse_score_kind(std::string_view name) {
    if (name == "cosine") return ScoreKind::cosine;
    if (name == "dot") return ScoreKind::dot;
    throw ValidationError("unknown score kind: " + std::string(name));
}

const char* score_kind_name(ScoreKind kind) {
    return kind == ScoreKind::cosine ? "cosine" : "dot";
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

double score_triple(const EmbeddingTable& emb, const Triple& triple,
                    ScoreKind kind) {
    const auto head = emb.row(triple.subject);  // throws naming the entity
    const auto tail = emb.row(triple.object);
    if (kind == ScoreKind::dot) return dot(head, tail);
    return cosine(head, tail);
}

double auc(std::span<const double> positive_scores,
           std::span<const double> negative_scores) {
    if (positive_scores.empty() || negative_scores.empty())
        throw ValidationError("auc: empty score list");

    std::vector<std::pair<double, bool>> scored;
    scored.reserve(positive_scores.size() + negative_scores.size());
    for (double s : positive_scores) scored.emplace_back(s, true);
    for (double s : negative_scores) scored.emplace_back(s, false);
    std::sort(scored.begin(), scored.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    // Midranks make ties count as half-wins exactly.
    double rank_sum_positive = 0.0;
    std::size_t i = 0;
    while (i < scored.size()) {
        std::size_t j = i;
        while (j < scored.size() && scored[j].first == scored[i].first) ++j;
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k)
            if (scored[k].second) rank_sum_positive += midrank;
        i = j;
    }

    const double np = static_cast<double>(positive_scores.size());
    const double nn = static_cast<double>(negative_scores.size());
    const double u = rank_sum_positive - np * (np + 1.0) / 2.0;
    return u / (np * nn);
}

std::vector<RankingCase> parse_ranking_cases(std::istream& in) {
    std::vector<RankingCase> cases;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0)
            throw ParseError("expected 'anchor<TAB>id,id,...'", line_no);
        RankingCase c;
        c.anchor = line.substr(0, tab);
        std::size_t start = tab + 1;
        while (start <= line.size()) {
            std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) comma = line.size();
            std::string id = line.substr(start, comma - start);
            if (!id.empty() && id != c.anchor) c.ground_truth.push_back(std::move(id));
            start = comma + 1;
        }
        if (c.ground_truth.empty())
            throw ParseError("empty ground-truth set for '" + c.anchor + "'", line_no);
        std::sort(c.ground_truth.begin(), c.ground_truth.end());
        c.ground_truth.erase(
            std::unique(c.ground_truth.begin(), c.ground_truth.end()),
            c.ground_truth.end());
        cases.push_back(std::move(c));
    }
    return cases;
}

std::vector<RankingCase> load_ranking_cases(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open ground-truth file: " + path);
    return parse_ranking_cases(in);
}

namespace {

bool is_relevant(const RankingCase& c, const std::string& candidate) {
    return std::binary_search(c.ground_truth.begin(), c.ground_truth.end(),
                              candidate);
}

bool case_hit(const RankingCase& c, const Ranking& ranking, std::size_t k) {
    const std::size_t top = std::min(k, ranking.size());
    for (std::size_t i = 0; i < top; ++i)
        if (is_relevant(c, ranking[i])) return true;
    return false;
}

// 1-based rank of the first relevant candidate; 0 when none is present.
std::size_t first_relevant_rank(const RankingCase& c, const Ranking& ranking) {
    for (std::size_t i = 0; i < ranking.size(); ++i)
        if (is_relevant(c, ranking[i])) return i + 1;
    return 0;
}

double case_ndcg(const RankingCase& c, const Ranking& ranking, std::size_t k) {
    double dcg = 0.0;
    std::size_t relevant_total = 0;
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        if (!is_relevant(c, ranking[i])) continue;
        ++relevant_total;
        if (i < k) dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
    }
    double idcg = 0.0;
    const std::size_t ideal = std::min(k, relevant_total);
    for (std::size_t i = 0; i < ideal; ++i)
        idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
    return idcg > 0.0 ? dcg / idcg : 0.0;
}

void check_cases(std::span<const RankingCase> cases,
                 std::span<const Ranking> rankings, std::size_t k) {
    if (k < 1) throw ValidationError("k must be >= 1");
    if (cases.size() != rankings.size())
        throw ValidationError("cases and rankings differ in length");
    if (cases.empty()) throw ValidationError("no ranking cases");
    for (std::size_t i = 0; i < rankings.size(); ++i)
        if (rankings[i].empty())
            throw ValidationError("empty ranking for case '" + cases[i].anchor + "'");
}

}  // namespace

double hits_at_k(std::span<const RankingCase> cases,
                 std::span<const Ranking> rankings, std::size_t k) {
    check_cases(cases, rankings, k);
    double hits = 0.0;
    for (std::size_t i = 0; i < cases.size(); ++i)
        if (case_hit(cases[i], rankings[i], k)) hits += 1.0;
    return hits / static_cast<double>(cases.size());
}

double mrr(std::span<const RankingCase> cases, std::span<const Ranking> rankings) {
    check_cases(cases, rankings, 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const std::size_t rank = first_relevant_rank(cases[i], rankings[i]);
        if (rank > 0) sum += 1.0 / static_cast<double>(rank);
    }
    return sum / static_cast<double>(cases.size());
}

double ndcg_at_k(std::span<const RankingCase> cases,
                 std::span<const Ranking> rankings, std::size_t k) {
    check_cases(cases, rankings, k);
    double sum = 0.0;
    for (std::size_t i = 0; i < cases.size(); ++i)
        sum += case_ndcg(cases[i], rankings[i], k);
    return sum / static_cast<double>(cases.size());
}

std::string EvalReport::to_json_string(int indent) const {
    nlohmann::ordered_json j;
    nlohmann::ordered_json m;
    for (const auto& [key, value] : metrics) m[key] = value;
    j["metrics"] = m;
    j["provenance"] = {{"model", model},
                       {"dataset", dataset},
                       {"weight_config", weight_config},
                       {"seed", seed}};
    j["skipped"] = {{"test_triples", skipped_test_triples},
                    {"candidates", skipped_candidates}};
    j["cases"] = {{"evaluated", cases_evaluated}, {"total", cases_total}};
    return j.dump(indent);
}

std::string EvalReport::csv_header() {
    return "model,dataset,weight_config,seed,AUC,Hits@1,Hits@3,Hits@5,Hits@10,"
           "MRR,nDCG@10,skipped_test_triples,cases_evaluated,cases_total";
}

std::string EvalReport::to_csv_row() const {
    std::ostringstream row;
    row << model << ',' << dataset << ',' << weight_config << ',' << seed;
    for (const char* key :
         {"AUC", "Hits@1", "Hits@3", "Hits@5", "Hits@10", "MRR", "nDCG@10"}) {
        row << ',';
        const auto it = metrics.find(key);
        if (it != metrics.end()) row << it->second;
    }
    row << ',' << skipped_test_triples << ',' << cases_evaluated << ','
        << cases_total;
    return row.str();
}

EvalReport evaluate(const EmbeddingTable& emb, const EdgeSplit& split,
                    const NegativeBatch& negatives,
                    std::span<const RankingCase> cases,
                    std::span<const std::string> candidate_pool,
                    ScoreKind kind) {
    EvalReport report;

    const auto try_score = [&](const Triple& t, std::vector<double>& out) {
        if (!emb.id_of(t.subject) || !emb.id_of(t.object)) {
            ++report.skipped_test_triples;
            return;
        }
        out.push_back(score_triple(emb, t, kind));
    };

    std::vector<double> pos_scores;
    pos_scores.reserve(split.test.size());
    for (const Triple& t : split.test) try_score(t, pos_scores);

    std::vector<double> neg_scores;
    neg_scores.reserve(negatives.negatives.size());
    for (const CorruptedTriple& c : negatives.negatives) try_score(c.triple, neg_scores);

    if (pos_scores.empty() || neg_scores.empty())
        throw RuntimeError("evaluate: no scorable positive/negative test triples");
    report.metrics["AUC"] = auc(pos_scores, neg_scores);

    // Pool entities without a vector cannot be ranked anywhere.
    std::vector<std::string> scorable_pool;
    scorable_pool.reserve(candidate_pool.size());
    for (const std::string& entity : candidate_pool) {
        if (emb.id_of(entity))
            scorable_pool.push_back(entity);
        else
            ++report.skipped_candidates;
    }

    report.cases_total = cases.size();
    double hits1 = 0.0, hits3 = 0.0, hits5 = 0.0, hits10 = 0.0;
    double rr_sum = 0.0, ndcg_sum = 0.0;
    for (const RankingCase& c : cases) {
        if (scorable_pool.empty()) break;    // nothing to rank; all contribute 0
        if (!emb.id_of(c.anchor)) continue;  // contributes zero to every metric
        const Recommendation rec =
            recommend(emb, c.anchor, scorable_pool.size(), scorable_pool, kind);
        if (rec.items.empty()) continue;
        Ranking ranking;
        ranking.reserve(rec.items.size());
        for (const auto& [name, score] : rec.items) ranking.push_back(name);
        ++report.cases_evaluated;
        if (case_hit(c, ranking, 1)) hits1 += 1.0;
        if (case_hit(c, ranking, 3)) hits3 += 1.0;
        if (case_hit(c, ranking, 5)) hits5 += 1.0;
        if (case_hit(c, ranking, 10)) hits10 += 1.0;
        const std::size_t rank = first_relevant_rank(c, ranking);
        if (rank > 0) rr_sum += 1.0 / static_cast<double>(rank);
        ndcg_sum += case_ndcg(c, ranking, 10);
    }
    const double denom = cases.empty() ? 1.0 : static_cast<double>(cases.size());
    report.metrics["Hits@1"] = hits1 / denom;
    report.metrics["Hits@3"] = hits3 / denom;
    report.metrics["Hits@5"] = hits5 / denom;
    report.metrics["Hits@10"] = hits10 / denom;
    report.metrics["MRR"] = rr_sum / denom;
    report.metrics["nDCG@10"] = ndcg_sum / denom;
    return report;
}

}  // namespace kgrec
