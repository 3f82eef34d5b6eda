#include "kgrec/records.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <ostream>

#include "kgrec/error.hpp"

namespace kgrec {

std::string apply_era_rule(int year) {
    return year < 1945 ? "Traditional" : "Contemporary";
}

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool has_qualitative_label(const std::map<std::string, std::string>& qualitative,
                           std::string_view wanted) {
    return std::any_of(qualitative.begin(), qualitative.end(),
                       [&](const auto& kv) { return lower(kv.second) == wanted; });
}

}  // namespace

std::optional<std::string> apply_complexity_rule(
    int lexile, const std::map<std::string, std::string>& qualitative) {
    if (lexile < 925) {
        if (has_qualitative_label(qualitative, "slightly complex"))
            return "Slightly_Complex";
        return std::nullopt;
    }
    if (lexile < 1185) {
        if (has_qualitative_label(qualitative, "moderately complex"))
            return "Moderately_Complex";
        return std::nullopt;
    }
    if (lexile < 1335) return "Very_Complex";
    if (lexile <= 1440) return "Exceedingly_Complex";
    return std::nullopt;
}

namespace {

void validate_record(const TextRecord& record, std::size_t ordinal) {
    const auto fail = [&](const std::string& field, const std::string& why) {
        const std::string name = record.title.empty()
                                     ? "record #" + std::to_string(ordinal)
                                     : "record '" + record.title + "'";
        throw ValidationError(name + ": field '" + field + "' " + why);
    };
    if (record.title.empty()) fail("title", "must be non-empty");
    if (record.year && *record.year <= 0) fail("year", "must be positive");
    if (record.lexile && *record.lexile < 0) fail("lexile", "must be non-negative");
    for (const auto& a : record.authors)
        if (a.empty()) fail("authors", "contains an empty name");
}

std::string measure_predicate(const std::string& measure) {
    const std::string key = sanitize_identifier(lower(measure));
    if (key.rfind("has_", 0) == 0) return key;
    return "has_" + key;
}

}  // namespace

std::vector<Triple> ingest_records(std::span<const TextRecord> records,
                                   const IngestOptions& options) {
    std::vector<Triple> triples;
    std::size_t ordinal = 0;
    for (const TextRecord& record : records) {
        ++ordinal;
        validate_record(record, ordinal);
        const std::string text = sanitize_identifier(record.title);

        if (options.emit_type_triples)
            triples.push_back({text, "isA", "Text", false});
        for (const auto& author : record.authors)
            triples.push_back({text, "has_author", sanitize_identifier(author), false});
        for (const auto& genre : record.genres)
            triples.push_back({text, "has_genre", sanitize_identifier(genre), false});
        for (const auto& theme : record.themes)
            triples.push_back({text, "has_theme", sanitize_identifier(theme), false});
        for (const auto& sub : record.subthemes)
            triples.push_back({text, "has_subtheme", sanitize_identifier(sub), false});
        for (const auto& [measure, label] : record.qualitative)
            triples.push_back({text, measure_predicate(measure),
                               sanitize_identifier(label), false});

        if (record.lexile)
            triples.push_back({text, "has_lexile", std::to_string(*record.lexile), true});
        if (record.year) {
            triples.push_back({text, "has_year", std::to_string(*record.year), true});
            triples.push_back({text, "has_era", apply_era_rule(*record.year), false});
        }
        if (record.lexile) {
            const auto complexity =
                apply_complexity_rule(*record.lexile, record.qualitative);
            if (complexity) {
                triples.push_back({text, "has_text_complexity", *complexity, false});
            } else if (options.warnings) {
                *options.warnings
                    << "warning: no complexity band for '" << record.title
                    << "' (lexile " << *record.lexile << ")\n";
            }
        }
    }
    return triples;
}

namespace {

std::vector<std::string> string_list(const nlohmann::json& j, const char* key) {
    std::vector<std::string> out;
    if (!j.contains(key)) return out;
    for (const auto& item : j.at(key)) out.push_back(item.get<std::string>());
    return out;
}

}  // namespace

std::vector<TextRecord> parse_records(std::istream& in) {
    std::vector<TextRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;

        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("invalid record JSON: ") + e.what(), line_no);
        }
        try {
            TextRecord r;
            r.title = j.value("title", "");
            if (j.contains("authors"))
                r.authors = string_list(j, "authors");
            else if (j.contains("author"))
                r.authors.push_back(j.at("author").get<std::string>());
            if (j.contains("year")) r.year = j.at("year").get<int>();
            r.genres = string_list(j, "genres");
            r.themes = string_list(j, "themes");
            r.subthemes = string_list(j, "subthemes");
            if (j.contains("lexile")) r.lexile = j.at("lexile").get<int>();
            if (j.contains("qualitative_measures"))
                for (const auto& [k, v] : j.at("qualitative_measures").items())
                    r.qualitative[k] = v.get<std::string>();
            records.push_back(std::move(r));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("bad record field: ") + e.what(), line_no);
        }
    }
    return records;
}

std::vector<TextRecord> load_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open records file: " + path);
    return parse_records(in);
}

}  // namespace kgrec
