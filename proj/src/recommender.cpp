#include "kgrec/recommender.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "kgrec/error.hpp"

namespace kgrec {

double cosine(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw ValidationError("cosine: dimension mismatch");
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    if (aa == 0.0 || bb == 0.0)
        throw ValidationError("cosine: zero vector has no direction");
    const double value = ab / (std::sqrt(aa) * std::sqrt(bb));
    return std::clamp(value, -1.0, 1.0);
}

Recommendation recommend(const EmbeddingTable& emb, const std::string& anchor,
                         std::size_t n, std::span<const std::string> pool,
                         ScoreKind kind) {
    if (n < 1) throw ValidationError("recommend: n must be >= 1");
    const auto anchor_row = emb.row(anchor);  // throws when unknown

    Recommendation rec;
    rec.anchor = anchor;
    rec.requested = n;
    rec.items.reserve(pool.size());
    for (const std::string& candidate : pool) {
        if (candidate == anchor) continue;
        const auto id = emb.id_of(candidate);
        if (!id) continue;
        const auto row = emb.row(*id);
        const double score =
            kind == ScoreKind::cosine
                ? cosine(anchor_row, row)
                : [&] {
                      double s = 0.0;
                      for (std::size_t i = 0; i < row.size(); ++i)
                          s += anchor_row[i] * row[i];
                      return s;
                  }();
        rec.items.emplace_back(candidate, score);
    }
    std::sort(rec.items.begin(), rec.items.end(),
              [](const auto& a, const auto& b) {
                  if (a.second != b.second) return a.second > b.second;
                  return a.first < b.first;
              });
    if (rec.items.size() > n) rec.items.resize(n);
    return rec;
}

void write_recommendation(std::ostream& out, const Recommendation& rec) {
    out << std::fixed << std::setprecision(6);
    for (std::size_t i = 0; i < rec.items.size(); ++i)
        out << (i + 1) << '\t' << rec.items[i].first << '\t'
            << rec.items[i].second << '\n';
    out.unsetf(std::ios::fixed);
}

}  // namespace kgrec
