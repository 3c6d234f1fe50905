#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "grid_set.hpp"
#include "lipschitz.hpp"
#include "metric_space.hpp"
#include "rug.hpp"

namespace metrikit::io {

enum class MetricChoice { euclidean, manhattan, rug, precomputed };

inline std::optional<MetricChoice> metric_choice_from(const std::string& name) {
    if (name == "euclidean") return MetricChoice::euclidean;
    if (name == "manhattan") return MetricChoice::manhattan;
    if (name == "rug") return MetricChoice::rug;
    if (name == "precomputed") return MetricChoice::precomputed;
    return std::nullopt;
}

inline const char* to_string(MetricChoice choice) {
    switch (choice) {
        case MetricChoice::euclidean: return "euclidean";
        case MetricChoice::manhattan: return "manhattan";
        case MetricChoice::rug: return "rug";
        case MetricChoice::precomputed: return "precomputed";
    }
    return "unknown";
}

namespace detail {

inline std::string trim(const std::string& text) {
    std::size_t first = 0;
    std::size_t last = text.size();
    while (first < last && std::isspace(static_cast<unsigned char>(text[first]))) ++first;
    while (last > first && std::isspace(static_cast<unsigned char>(text[last - 1]))) --last;
    return text.substr(first, last - first);
}

inline double parse_double(const std::string& token, const std::string& path, std::size_t line) {
    const std::string t = trim(token);
    if (t.empty()) throw ParseError(path, line, "empty numeric field");
    const char* begin = t.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end != begin + t.size()) throw ParseError(path, line, "malformed number '" + t + "'");
    return value;
}

inline std::size_t parse_count(const std::string& token, const std::string& path, std::size_t line) {
    const std::string t = trim(token);
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError(path, line, "expected a nonnegative integer, got '" + t + "'");
    return static_cast<std::size_t>(std::strtoull(t.c_str(), nullptr, 10));
}

struct NumberedRow {
    std::size_t line;
    std::vector<double> values;
};

/// Comma-separated numeric rows; blank lines are skipped but still counted.
inline std::vector<NumberedRow> load_numeric_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::vector<NumberedRow> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        NumberedRow row{lineno, {}};
        std::stringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ','))
            row.values.push_back(parse_double(field, path, lineno));
        rows.push_back(std::move(row));
    }
    return rows;
}

struct NumberedToken {
    std::size_t line;
    std::string text;
};

/// Whitespace- or comma-separated tokens with '#' comments running to the end
/// of their line.
inline std::vector<NumberedToken> load_tokens(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::vector<NumberedToken> tokens;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string current;
        for (char c : line) {
            if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
                if (!current.empty()) tokens.push_back({lineno, std::move(current)});
                current.clear();
            } else {
                current.push_back(c);
            }
        }
        if (!current.empty()) tokens.push_back({lineno, std::move(current)});
    }
    return tokens;
}

inline std::string format17(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

}  // namespace detail

/// A space together with the axiom report taken at load time. Violations are
/// surfaced here, never repaired; callers decide whether they are fatal.
struct LoadedSpace {
    FiniteMetricSpace space;
    MetricReport report;
};

inline std::vector<std::vector<double>> load_points(const std::string& path) {
    const auto rows = detail::load_numeric_rows(path);
    if (rows.empty()) throw ParseError(path, 0, "file holds no data rows");
    const std::size_t width = rows.front().values.size();
    std::vector<std::vector<double>> points;
    points.reserve(rows.size());
    for (const auto& row : rows) {
        if (row.values.size() != width)
            throw ParseError(path, row.line,
                             "expected " + std::to_string(width) + " columns, got " +
                                 std::to_string(row.values.size()));
        points.push_back(row.values);
    }
    return points;
}

inline FiniteMetricSpace load_matrix(const std::string& path) {
    const auto rows = detail::load_numeric_rows(path);
    if (rows.empty()) throw ParseError(path, 0, "file holds no data rows");
    const std::size_t n = rows.front().values.size();
    if (rows.size() != n)
        throw ParseError(path, rows.back().line,
                         "square matrix needs " + std::to_string(n) + " rows, got " +
                             std::to_string(rows.size()));
    std::vector<std::vector<double>> matrix;
    matrix.reserve(n);
    for (const auto& row : rows) {
        if (row.values.size() != n)
            throw ParseError(path, row.line,
                             "square matrix row needs " + std::to_string(n) + " values, got " +
                                 std::to_string(row.values.size()));
        matrix.push_back(row.values);
    }
    return FiniteMetricSpace::from_rows(matrix);
}

inline LoadedSpace load_space(const std::string& path, MetricChoice choice, double tol = 0.0) {
    if (choice == MetricChoice::precomputed) {
        FiniteMetricSpace space = load_matrix(path);
        MetricReport report = verify_metric(space, tol);
        return {std::move(space), std::move(report)};
    }
    const auto points = load_points(path);
    if (choice == MetricChoice::rug && points.front().size() != 2)
        throw StructuralError("rug points need exactly two columns");
    FiniteMetricSpace space = [&] {
        switch (choice) {
            case MetricChoice::manhattan:
                return FiniteMetricSpace::induced(points, ManhattanMetric{});
            case MetricChoice::rug: return FiniteMetricSpace::induced(points, RugMetric{});
            default: return FiniteMetricSpace::induced(points, EuclideanMetric{});
        }
    }();
    MetricReport report = verify_metric(space, tol);
    return {std::move(space), std::move(report)};
}

inline ScalarField load_field(const std::string& path, std::size_t expected) {
    const auto rows = detail::load_numeric_rows(path);
    ScalarField field;
    field.values.reserve(rows.size());
    for (const auto& row : rows) {
        if (row.values.size() != 1)
            throw ParseError(path, row.line, "field rows carry exactly one value");
        field.values.push_back(row.values.front());
    }
    if (field.values.size() != expected)
        throw StructuralError("field holds " + std::to_string(field.values.size()) +
                              " values but the space has " + std::to_string(expected) + " points");
    return field;
}

inline Correspondence load_correspondence(const std::string& path, std::size_t expected) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    Correspondence corr;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty()) continue;
        corr.image.push_back(detail::parse_count(t, path, lineno));
    }
    if (corr.image.size() != expected)
        throw StructuralError("correspondence holds " + std::to_string(corr.image.size()) +
                              " entries but the space has " + std::to_string(expected) + " points");
    return corr;
}

/// Mask format: a header "n resolution" followed by resolution^n cells as 0/1
/// tokens in row-major order (axis 0 slowest). '#' comments anywhere.
inline GridSet load_mask(const std::string& path) {
    const auto tokens = detail::load_tokens(path);
    if (tokens.size() < 2) throw ParseError(path, 0, "mask needs a 'dimension resolution' header");
    const std::size_t dim = detail::parse_count(tokens[0].text, path, tokens[0].line);
    const std::size_t resolution = detail::parse_count(tokens[1].text, path, tokens[1].line);
    if (dim < 1 || resolution < 1)
        throw ParseError(path, tokens[0].line, "dimension and resolution must be positive");
    GridSet set = GridSet::empty(dim, resolution);
    if (tokens.size() - 2 != set.cells())
        throw ParseError(path, tokens.back().line,
                         "mask needs " + std::to_string(set.cells()) + " cells, got " +
                             std::to_string(tokens.size() - 2));
    for (std::size_t c = 0; c < set.cells(); ++c) {
        const auto& token = tokens[c + 2];
        if (token.text == "1") {
            set.set_occupied(c, true);
        } else if (token.text != "0") {
            throw ParseError(path, token.line, "mask cells must be 0 or 1, got '" + token.text + "'");
        }
    }
    return set;
}

inline void save_mask(const GridSet& set, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ResourceError("cannot write file " + path);
    out << set.dim() << ' ' << set.resolution() << '\n';
    for (std::size_t c = 0; c < set.cells(); ++c) {
        out << (set.occupied(c) ? '1' : '0');
        out << ((c + 1) % set.resolution() == 0 ? '\n' : ' ');
    }
}

inline void save_matrix_csv(const FiniteMetricSpace& space, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ResourceError("cannot write file " + path);
    for (std::size_t i = 0; i < space.size(); ++i) {
        for (std::size_t j = 0; j < space.size(); ++j) {
            if (j > 0) out << ',';
            out << detail::format17(space.distance(i, j));
        }
        out << '\n';
    }
}

inline void save_field_csv(const ScalarField& field, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ResourceError("cannot write file " + path);
    for (double v : field.values) out << detail::format17(v) << '\n';
}

inline std::vector<std::size_t> parse_index_list(const std::string& text) {
    std::vector<std::size_t> indices;
    std::stringstream fields(text);
    std::string field;
    while (std::getline(fields, field, ',')) {
        const std::string t = detail::trim(field);
        if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
            throw DomainError("index lists are comma-separated nonnegative integers, got '" + t + "'");
        indices.push_back(static_cast<std::size_t>(std::strtoull(t.c_str(), nullptr, 10)));
    }
    if (indices.empty()) throw DomainError("index list is empty");
    return indices;
}

inline std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream fields(text);
    std::string field;
    while (std::getline(fields, field, ',')) {
        const std::string t = detail::trim(field);
        const char* begin = t.c_str();
        char* end = nullptr;
        const double value = std::strtod(begin, &end);
        if (t.empty() || end != begin + t.size())
            throw DomainError("real lists are comma-separated numbers, got '" + t + "'");
        values.push_back(value);
    }
    if (values.empty()) throw DomainError("real list is empty");
    return values;
}

}  // namespace metrikit::io
