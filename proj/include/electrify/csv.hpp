#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "electrify/error.hpp"

namespace electrify::csv {

struct Row {
    std::size_t line = 0;  // 1-based line number in the source file
    std::vector<std::string> fields;
};

// A parsed CSV file with a header row. Quoted fields (RFC 4180 style) and
// CRLF line endings are accepted; a leading UTF-8 BOM is stripped.
class Table {
public:
    Table() = default;

    static Table parse(std::string_view text, std::string source = "<memory>") {
        Table t;
        t.source_ = std::move(source);
        if (text.size() >= 3 && static_cast<unsigned char>(text[0]) == 0xEF &&
            static_cast<unsigned char>(text[1]) == 0xBB &&
            static_cast<unsigned char>(text[2]) == 0xBF) {
            text.remove_prefix(3);
        }

        std::vector<std::string> fields;
        std::string field;
        bool in_quotes = false;
        bool row_has_content = false;
        std::size_t line = 1;
        std::size_t row_start = 1;

        auto finish_row = [&] {
            fields.push_back(std::move(field));
            field.clear();
            bool blank = fields.size() == 1 && fields[0].empty() && !row_has_content;
            if (!blank) {
                if (t.header_.empty()) {
                    t.header_ = std::move(fields);
                    for (auto& h : t.header_) h = trim(h);
                } else {
                    t.rows_.push_back(Row{row_start, std::move(fields)});
                }
            }
            fields.clear();
            row_has_content = false;
        };

        for (std::size_t i = 0; i < text.size(); ++i) {
            char c = text[i];
            if (in_quotes) {
                if (c == '"') {
                    if (i + 1 < text.size() && text[i + 1] == '"') {
                        field.push_back('"');
                        ++i;
                    } else {
                        in_quotes = false;
                    }
                } else {
                    if (c == '\n') ++line;
                    field.push_back(c);
                }
                continue;
            }
            switch (c) {
                case '"':
                    in_quotes = true;
                    row_has_content = true;
                    break;
                case ',':
                    fields.push_back(std::move(field));
                    field.clear();
                    row_has_content = true;
                    break;
                case '\r':
                    break;
                case '\n':
                    finish_row();
                    ++line;
                    row_start = line;
                    break;
                default:
                    field.push_back(c);
                    row_has_content = true;
            }
        }
        if (in_quotes) {
            throw Error(ErrorCategory::MalformedRow,
                        t.source_ + ":" + std::to_string(row_start) + ": unterminated quoted field");
        }
        if (!field.empty() || !fields.empty() || row_has_content) finish_row();

        for (std::size_t i = 0; i < t.header_.size(); ++i) t.index_[t.header_[i]] = i;
        return t;
    }

    static Table read(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error(ErrorCategory::MissingFile, path.string() + " not found");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse(ss.str(), path.string());
    }

    const std::string& source() const { return source_; }
    const std::vector<std::string>& header() const { return header_; }
    const std::vector<Row>& rows() const { return rows_; }

    std::optional<std::size_t> column(std::string_view name) const {
        auto it = index_.find(std::string(name));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t require_column(std::string_view name) const {
        auto c = column(name);
        if (!c) {
            throw Error(ErrorCategory::MalformedRow,
                        source_ + ":1: missing required column '" + std::string(name) + "'");
        }
        return *c;
    }

    // Field value, or empty when the row is shorter than the header.
    std::string_view get(const Row& row, std::size_t col) const {
        if (col >= row.fields.size()) return {};
        return row.fields[col];
    }

    std::string where(const Row& row) const { return source_ + ":" + std::to_string(row.line); }

    [[noreturn]] void fail(const Row& row, const std::string& what) const {
        throw Error(ErrorCategory::MalformedRow, where(row) + ": " + what);
    }

    static std::string trim(std::string_view s) {
        auto b = s.find_first_not_of(" \t");
        if (b == std::string_view::npos) return {};
        auto e = s.find_last_not_of(" \t");
        return std::string(s.substr(b, e - b + 1));
    }

private:
    std::string source_;
    std::vector<std::string> header_;
    std::vector<Row> rows_;
    std::unordered_map<std::string, std::size_t> index_;
};

inline std::optional<double> parse_double(std::string_view s) {
    std::string t = Table::trim(s);
    if (t.empty()) return std::nullopt;
    double v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
    return v;
}

inline std::optional<long long> parse_int(std::string_view s) {
    std::string t = Table::trim(s);
    if (t.empty()) return std::nullopt;
    long long v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
    return v;
}

// Quotes a field only when it needs it.
inline std::string escape(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

// Shortest decimal form that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace electrify::csv
