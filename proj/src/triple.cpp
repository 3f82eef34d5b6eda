#include "kgrec/triple.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "kgrec/error.hpp"

namespace kgrec {

std::string sanitize_identifier(std::string_view name) {
    std::string out(name);
    for (char& c : out)
        if (c == ' ') c = '_';
    return out;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

}  // namespace

std::vector<Triple> parse_triples(std::istream& in) {
    std::vector<Triple> triples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;

        const auto fields = split_tabs(line);
        if (fields.size() != 3 && fields.size() != 4)
            throw ParseError("expected 3 or 4 tab-separated fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        for (std::size_t i = 0; i < 3; ++i)
            if (fields[i].empty()) throw ParseError("empty field", line_no);

        Triple t{fields[0], fields[1], fields[2], false};
        if (fields.size() == 4) {
            if (fields[3] != "literal")
                throw ParseError("unknown triple marker '" + fields[3] + "'",
                                 line_no);
            t.is_data_property = true;
        }
        triples.push_back(std::move(t));
    }
    return triples;
}

std::vector<Triple> load_triples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open triple file: " + path);
    return parse_triples(in);
}

void write_triples(std::ostream& out, std::span<const Triple> triples) {
    for (const Triple& t : triples) {
        out << t.subject << '\t' << t.predicate << '\t' << t.object;
        if (t.is_data_property) out << "\tliteral";
        out << '\n';
    }
}

void save_triples(const std::string& path, std::span<const Triple> triples) {
    std::ofstream out(path);
    if (!out) throw RuntimeError("cannot write triple file: " + path);
    write_triples(out, triples);
}

}  // namespace kgrec
