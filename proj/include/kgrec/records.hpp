#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kgrec/triple.hpp"

namespace kgrec {

struct TextRecord {
    std::string title;
    std::vector<std::string> authors;
    std::optional<int> year;
    std::vector<std::string> genres;
    std::vector<std::string> themes;
    std::vector<std::string> subthemes;
    std::optional<int> lexile;
    std::map<std::string, std::string> qualitative;  // measure -> label
};

// Era axiom: texts from before 1945 are Traditional, later ones Contemporary.
std::string apply_era_rule(int year);

// Lexile complexity bands. Bands below 1185 additionally require a matching
// qualitative label; returns nothing when no band applies.
std::optional<std::string> apply_complexity_rule(
    int lexile, const std::map<std::string, std::string>& qualitative);

struct IngestOptions {
    bool emit_type_triples = true;   // (title, isA, Text)
    std::ostream* warnings = nullptr;
};

// Expands records into triples: has_author / has_genre / has_theme /
// has_subtheme / qualitative-measure edges, lexile and year data properties,
// plus era and complexity triples from the two axioms above.
std::vector<Triple> ingest_records(std::span<const TextRecord> records,
                                   const IngestOptions& options = {});

// Records file: one JSON object per line.
std::vector<TextRecord> parse_records(std::istream& in);
std::vector<TextRecord> load_records(const std::string& path);

}  // namespace kgrec
