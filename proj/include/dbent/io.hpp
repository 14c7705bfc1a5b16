#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "similarity.hpp"

namespace dbent::io {

/// Nucleotide alphabet used by the FASTA pipeline.
inline constexpr std::string_view dna_alphabet = "ACGTN";

struct FastaRecord {
    std::string description;
    std::string sequence;
};

using TaxaLineage = std::vector<std::string>;

namespace detail {

inline std::string_view trim(std::string_view s) {
    auto ws = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    while (!s.empty() && ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && ws(s.back())) s.remove_suffix(1);
    return s;
}

/// Split on LF, CR or CRLF.
inline std::vector<std::string_view> lines(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '\n' && text[i] != '\r') continue;
        out.push_back(text.substr(start, i - start));
        if (text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
        start = i + 1;
    }
    if (start < text.size()) out.push_back(text.substr(start));
    return out;
}

}  // namespace detail

inline std::string read_all(std::istream& in) {
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

/// Upper-case and replace every non-ACGT character by N.
inline std::string normalize_nucleotides(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        out += (u == 'A' || u == 'C' || u == 'G' || u == 'T') ? u : 'N';
    }
    return out;
}

inline std::vector<FastaRecord> parse_fasta(std::string_view text) {
    std::vector<FastaRecord> records;
    for (auto raw : detail::lines(text)) {
        const auto line = detail::trim(raw);
        if (line.empty()) continue;
        if (line.front() == '>') {
            records.push_back({std::string(detail::trim(line.substr(1))), {}});
            continue;
        }
        if (records.empty()) throw std::invalid_argument("FASTA sequence data before the first '>' header");
        records.back().sequence += normalize_nucleotides(line);
    }
    if (records.empty()) throw std::invalid_argument("no '>' header found in FASTA input");
    for (const auto& r : records)
        if (r.sequence.empty()) throw std::invalid_argument("empty sequence under header '" + r.description + "'");
    return records;
}

inline std::string render_fasta(const std::vector<FastaRecord>& records, std::size_t width = 70) {
    std::string out;
    for (const auto& r : records) {
        out += '>';
        out += r.description;
        out += '\n';
        for (std::size_t i = 0; i < r.sequence.size(); i += width) {
            out += r.sequence.substr(i, width);
            out += '\n';
        }
    }
    return out;
}

/// Lineages from the lines between each ORGANISM line and the following
/// REFERENCE line. The first `skip` names of every lineage are dropped.
inline std::vector<TaxaLineage> parse_genbank_lineages(std::string_view text, std::size_t skip = 0) {
    const auto ls = detail::lines(text);
    std::vector<TaxaLineage> out;
    for (std::size_t i = 0; i < ls.size(); ++i) {
        if (ls[i].find("  ORGANISM  ") == std::string_view::npos) continue;
        std::size_t j = i + 1;
        while (j < ls.size() && !detail::trim(ls[j]).starts_with("REFERENCE")) ++j;
        if (j == ls.size()) throw std::invalid_argument("ORGANISM block without a following REFERENCE line");
        std::string joined;
        for (std::size_t r = i + 1; r < j; ++r) {
            joined += ' ';
            joined += detail::trim(ls[r]);
        }
        TaxaLineage lineage;
        std::size_t start = 0;
        while (start <= joined.size()) {
            std::size_t end = joined.find(';', start);
            if (end == std::string::npos) end = joined.size();
            auto name = detail::trim(std::string_view(joined).substr(start, end - start));
            while (!name.empty() && name.back() == '.') name.remove_suffix(1);
            name = detail::trim(name);
            if (!name.empty()) {
                // collapse internal runs of whitespace
                std::string clean;
                for (char c : name) {
                    if (std::isspace(static_cast<unsigned char>(c))) {
                        if (!clean.empty() && clean.back() != ' ') clean += ' ';
                    } else {
                        clean += c;
                    }
                }
                lineage.push_back(std::move(clean));
            }
            start = end + 1;
        }
        if (lineage.empty()) throw std::invalid_argument("empty lineage in ORGANISM block");
        if (skip >= lineage.size())
            throw std::invalid_argument("lineage offset " + std::to_string(skip) + " removes every taxon");
        lineage.erase(lineage.begin(), lineage.begin() + static_cast<std::ptrdiff_t>(skip));
        out.push_back(std::move(lineage));
        i = j;
    }
    return out;
}

/// "Genus species" from the first two tokens after the last '|'; the whole
/// description when that fails.
inline std::string species_label(std::string_view description) {
    const auto bar = description.rfind('|');
    if (bar == std::string_view::npos) return std::string(description);
    std::istringstream rest{std::string(description.substr(bar + 1))};
    std::string genus, species;
    if (!(rest >> genus >> species)) return std::string(description);
    return genus + ' ' + species;
}

namespace detail {

inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

/// RFC 4180 record splitting; quoted fields may contain commas and quotes.
inline std::vector<std::vector<std::string>> csv_rows(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (any || !field.empty()) {
                row.push_back(std::move(field));
                rows.push_back(std::move(row));
            }
            row.clear();
            field.clear();
            any = false;
        } else {
            field += c;
            any = true;
        }
    }
    if (quoted) throw std::invalid_argument("unterminated quoted CSV field");
    if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace detail

/// Header row `label,<labels...>`, then one row per observation led by its label.
inline std::string write_distance_csv(const DistanceMatrix& d) {
    std::vector<std::string> labels = d.labels;
    if (labels.empty())
        for (std::size_t i = 0; i < d.size; ++i) labels.push_back("s" + std::to_string(i + 1));
    if (labels.size() != d.size) throw std::invalid_argument("label count does not match matrix size");
    std::string out = "label";
    for (const auto& l : labels) out += ',' + detail::csv_field(l);
    out += '\n';
    for (std::size_t i = 0; i < d.size; ++i) {
        out += detail::csv_field(labels[i]);
        for (std::size_t j = 0; j < d.size; ++j) {
            out += ',';
            out += dbent::detail::format_number(d(i, j));
        }
        out += '\n';
    }
    return out;
}

inline DistanceMatrix read_distance_csv(std::string_view text) {
    const auto rows = detail::csv_rows(text);
    if (rows.empty()) throw std::invalid_argument("empty distance CSV");
    const std::size_t n = rows.front().size() - 1;
    if (rows.size() != n + 1) throw std::invalid_argument("distance CSV is not square");
    DistanceMatrix d(n);
    d.labels.assign(rows.front().begin() + 1, rows.front().end());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = rows[i + 1];
        if (r.size() != n + 1) throw std::invalid_argument("distance CSV row " + std::to_string(i + 1) + " has the wrong width");
        for (std::size_t j = 0; j < n; ++j) {
            const auto f = detail::trim(r[j + 1]);
            double v = 0.0;
            auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc() || p != f.data() + f.size())
                throw std::invalid_argument("bad number '" + std::string(f) + "' in distance CSV");
            d.values[i * n + j] = v;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (d(i, i) != 0.0) throw std::invalid_argument("distance CSV diagonal must be zero");
        for (std::size_t j = 0; j < i; ++j)
            if (d(i, j) != d(j, i)) throw std::invalid_argument("distance CSV is not symmetric");
    }
    return d;
}

}  // namespace dbent::io
