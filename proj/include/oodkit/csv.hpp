#pragma once

#include <charconv>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "oodkit/data.hpp"

namespace oodkit {

// Shortest decimal form that parses back to the identical double, so every
// CSV and model file round-trips bit-exactly.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, const std::string& context) {
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw ParseError(context + ": bad number '" + std::string(text) + "'");
    return v;
}

inline long parse_long(std::string_view text, const std::string& context) {
    long v = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw ParseError(context + ": bad integer '" + std::string(text) + "'");
    return v;
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    if (lines.empty()) throw ParseError(path + ": empty file, header row required");
    return lines;
}

inline std::string where(const std::string& path, std::size_t line_no) {
    return path + ":" + std::to_string(line_no);
}

inline void check_header(const std::vector<std::string_view>& fields, const std::string& prefix,
                         bool with_label, const std::string& path) {
    std::size_t n = fields.size() - (with_label ? 1 : 0);
    if (n == 0 || (with_label && fields.back() != "label"))
        throw ParseError(path + ":1: expected header " + prefix + "0,...," +
                         (with_label ? std::string(",label") : std::string()));
    for (std::size_t i = 0; i < n; ++i)
        if (fields[i] != prefix + std::to_string(i))
            throw ParseError(path + ":1: unexpected header column '" + std::string(fields[i]) +
                             "'");
}

}  // namespace detail

/// CSV schema A: header p0,...,p{M-1}, one probability vector per row.
inline void save_probs(const std::string& path, const std::vector<ProbVector>& rows) {
    if (rows.empty()) throw std::invalid_argument("save_probs: nothing to write");
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot open for writing");
    for (std::size_t i = 0; i < rows[0].size(); ++i) out << (i ? ",p" : "p") << i;
    out << "\n";
    for (const auto& row : rows) {
        if (row.size() != rows[0].size())
            throw std::invalid_argument("save_probs: inconsistent vector sizes");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format_double(row[i]);
        }
        out << "\n";
    }
}

inline std::vector<ProbVector> load_probs(const std::string& path) {
    auto lines = detail::read_lines(path);
    auto header = detail::split_fields(lines[0]);
    detail::check_header(header, "p", false, path);
    std::size_t m = header.size();

    std::vector<ProbVector> rows;
    rows.reserve(lines.size() - 1);
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty() && li + 1 == lines.size()) break;
        auto fields = detail::split_fields(lines[li]);
        const std::string ctx = detail::where(path, li + 1);
        if (fields.size() != m)
            throw ParseError(ctx + ": row has " + std::to_string(fields.size()) +
                             " fields, expected " + std::to_string(m));
        std::vector<double> probs(m);
        for (std::size_t i = 0; i < m; ++i) probs[i] = parse_double(fields[i], ctx);
        try {
            rows.emplace_back(std::move(probs));
        } catch (const std::invalid_argument& e) {
            throw ParseError(ctx + ": " + e.what());
        }
    }
    return rows;
}

/// CSV schema B: header f0,...,f{d-1},label.
inline void save_labeled(const std::string& path, const std::vector<LabeledSample>& rows) {
    if (rows.empty()) throw std::invalid_argument("save_labeled: nothing to write");
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot open for writing");
    for (std::size_t i = 0; i < rows[0].features.size(); ++i) out << (i ? ",f" : "f") << i;
    out << ",label\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.features.size(); ++i) {
            if (i) out << ',';
            out << format_double(row.features[i]);
        }
        out << ',' << row.label << "\n";
    }
}

inline std::vector<LabeledSample> load_labeled(const std::string& path) {
    auto lines = detail::read_lines(path);
    auto header = detail::split_fields(lines[0]);
    detail::check_header(header, "f", true, path);
    std::size_t d = header.size() - 1;

    std::vector<LabeledSample> rows;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty() && li + 1 == lines.size()) break;
        auto fields = detail::split_fields(lines[li]);
        const std::string ctx = detail::where(path, li + 1);
        if (fields.size() != d + 1)
            throw ParseError(ctx + ": row has " + std::to_string(fields.size()) +
                             " fields, expected " + std::to_string(d + 1));
        std::vector<double> values(d);
        for (std::size_t i = 0; i < d; ++i) values[i] = parse_double(fields[i], ctx);
        long label = parse_long(fields[d], ctx);
        if (label < 0) throw ParseError(ctx + ": negative label");
        try {
            rows.emplace_back(FeatureVector(std::move(values)), static_cast<int>(label));
        } catch (const std::invalid_argument& e) {
            throw ParseError(ctx + ": " + e.what());
        }
    }
    return rows;
}

/// Unlabeled feature rows (OOD pools): header f0,...,f{d-1}.
inline void save_features(const std::string& path, const std::vector<FeatureVector>& rows) {
    if (rows.empty()) throw std::invalid_argument("save_features: nothing to write");
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot open for writing");
    for (std::size_t i = 0; i < rows[0].size(); ++i) out << (i ? ",f" : "f") << i;
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format_double(row[i]);
        }
        out << "\n";
    }
}

/// Accepts either the plain feature schema or schema B (label column is
/// dropped) so `predict` runs on any generated file.
inline std::vector<FeatureVector> load_features(const std::string& path) {
    auto lines = detail::read_lines(path);
    auto header = detail::split_fields(lines[0]);
    bool with_label = !header.empty() && header.back() == "label";
    detail::check_header(header, "f", with_label, path);
    std::size_t d = header.size() - (with_label ? 1 : 0);

    std::vector<FeatureVector> rows;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty() && li + 1 == lines.size()) break;
        auto fields = detail::split_fields(lines[li]);
        const std::string ctx = detail::where(path, li + 1);
        if (fields.size() != header.size())
            throw ParseError(ctx + ": row has " + std::to_string(fields.size()) +
                             " fields, expected " + std::to_string(header.size()));
        std::vector<double> values(d);
        for (std::size_t i = 0; i < d; ++i) values[i] = parse_double(fields[i], ctx);
        try {
            rows.emplace_back(std::move(values));
        } catch (const std::invalid_argument& e) {
            throw ParseError(ctx + ": " + e.what());
        }
    }
    return rows;
}

/// Single-column score files, header `score`. Used by `evaluate` when fed
/// raw detector scores instead of probability rows.
inline void save_scores(const std::string& path, const std::vector<double>& scores) {
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot open for writing");
    out << "score\n";
    for (double s : scores) out << format_double(s) << "\n";
}

inline std::vector<double> load_scores(const std::string& path) {
    auto lines = detail::read_lines(path);
    if (lines[0] != "score") throw ParseError(path + ":1: expected header 'score'");
    std::vector<double> scores;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty() && li + 1 == lines.size()) break;
        scores.push_back(parse_double(lines[li], detail::where(path, li + 1)));
    }
    return scores;
}

}  // namespace oodkit
