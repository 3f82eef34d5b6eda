#pragma once

#include <compare>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kgrec {

// One (subject, predicate, object) assertion. A data property carries a
// literal object (number or string) instead of an entity and is excluded
// from walk adjacency.
struct Triple {
    std::string subject;
    std::string predicate;
    std::string object;
    bool is_data_property = false;

    friend auto operator<=>(const Triple&, const Triple&) = default;
};

// Identifier normalization applied at ingestion: spaces become underscores;
// case is preserved.
std::string sanitize_identifier(std::string_view name);

// Triple TSV: "subject<TAB>predicate<TAB>object[<TAB>literal]".
// Lines starting with '#' are comments; blank lines are skipped.
std::vector<Triple> parse_triples(std::istream& in);
std::vector<Triple> load_triples(const std::string& path);
void write_triples(std::ostream& out, std::span<const Triple> triples);
void save_triples(const std::string& path, std::span<const Triple> triples);

}  // namespace kgrec
