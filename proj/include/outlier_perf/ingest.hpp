#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "outlier_perf/errors.hpp"
#include "outlier_perf/number_format.hpp"
#include "outlier_perf/record.hpp"

namespace outlier_perf {

namespace csv {

/// Splits one CSV line. Double-quoted fields may contain commas and escaped
/// quotes (""); records spanning several lines are not supported.
inline std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

inline std::string quote(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace csv

/// Parses the wide CSV panel held in `text`. `source` only labels messages.
inline std::vector<CompanyRecord> parse_dataset_text(std::string_view text, const DatasetConfig& config = {},
                                                     std::string_view source = "<input>") {
    const std::string where = std::string(source);
    std::vector<std::pair<std::size_t, std::string>> lines;
    {
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t nl = text.find('\n', pos);
            std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
            ++line_no;
            if (raw.find_first_not_of(" \t\r") != std::string_view::npos) lines.emplace_back(line_no, std::string(raw));
            if (nl == std::string_view::npos) break;
            pos = nl + 1;
        }
    }
    if (lines.empty()) throw DataError(DataErrorKind::empty_dataset, where + " has no header row");

    auto header = csv::split_line(lines.front().second);
    for (auto& h : header) {
        h.erase(0, h.find_first_not_of(" \t"));
        h.erase(h.find_last_not_of(" \t") + 1);
    }
    if (!header.empty() && header.front().starts_with("\xEF\xBB\xBF")) header.front().erase(0, 3);

    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < header.size(); ++i) index.emplace(header[i], i);
    const auto expected = config.columns();
    std::vector<std::size_t> col(expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        auto it = index.find(expected[i]);
        if (it == index.end()) {
            throw DataError(DataErrorKind::missing_column, where + " header lacks '" + expected[i] + "'",
                            lines.front().first, expected[i]);
        }
        col[i] = it->second;
    }
    if (lines.size() == 1) throw DataError(DataErrorKind::empty_dataset, where + " has no data rows");

    std::vector<CompanyRecord> records;
    records.reserve(lines.size() - 1);
    std::unordered_set<std::string> seen;

    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto& [line_no, line] = lines[r];
        const auto fields = csv::split_line(line);
        if (fields.size() != header.size()) {
            throw DataError(DataErrorKind::wrong_field_count,
                            "expected " + std::to_string(header.size()) + " fields, found " +
                                std::to_string(fields.size()),
                            line_no);
        }
        std::size_t next = 0;
        auto text_cell = [&] { return fields[col[next++]]; };
        auto number_cell = [&] {
            const std::size_t c = next++;
            auto v = parse_double(fields[col[c]]);
            if (!v) {
                throw DataError(DataErrorKind::non_numeric_cell, "'" + fields[col[c]] + "' is not a finite number",
                                line_no, expected[c]);
            }
            return *v;
        };

        CompanyRecord rec;
        rec.firm_id = text_cell();
        rec.name = text_cell();
        rec.sector = text_cell();
        if (rec.firm_id.empty()) throw DataError(DataErrorKind::non_numeric_cell, "empty firm_id", line_no, "firm_id");
        for (std::size_t i = 0; i < config.pre_window(); ++i) {
            const double v = number_cell();
            if (!(v > 0.0)) {
                throw DataError(DataErrorKind::non_positive_tta,
                                "firm '" + rec.firm_id + "' has TTA " + format_roundtrip(v) + " in " +
                                    config.pre_years[i],
                                line_no, expected[next - 1]);
            }
            rec.tta_pre.push_back(v);
        }
        for (auto kind : kIndicatorKinds) {
            for (std::size_t i = 0; i < config.post_window(); ++i) rec.perf(kind).push_back(number_cell());
        }
        if (!seen.insert(rec.firm_id).second) {
            throw DataError(DataErrorKind::duplicate_firm_id, "firm_id '" + rec.firm_id + "' repeated", line_no,
                            "firm_id");
        }
        records.push_back(std::move(rec));
    }
    return records;
}

inline std::vector<CompanyRecord> parse_dataset(const std::filesystem::path& path, const DatasetConfig& config = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(DataErrorKind::io, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_dataset_text(buf.str(), config, path.string());
}

/// Serializes records in canonical column order; numbers are written in
/// shortest round-trip form so parsing the text back is lossless.
inline std::string write_dataset(const std::vector<CompanyRecord>& records, const DatasetConfig& config = {}) {
    std::string out;
    const auto cols = config.columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) out += ',';
        out += cols[i];
    }
    out += '\n';
    for (const auto& rec : records) {
        out += csv::quote(rec.firm_id);
        out += ',' + csv::quote(rec.name);
        out += ',' + csv::quote(rec.sector);
        for (double v : rec.tta_pre) out += ',' + format_roundtrip(v);
        for (auto kind : kIndicatorKinds) {
            for (double v : rec.perf(kind)) out += ',' + format_roundtrip(v);
        }
        out += '\n';
    }
    return out;
}

inline void write_dataset_file(const std::filesystem::path& path, const std::vector<CompanyRecord>& records,
                               const DatasetConfig& config = {}) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(DataErrorKind::io, "cannot write " + path.string());
    out << write_dataset(records, config);
    if (!out) throw DataError(DataErrorKind::io, "write failed for " + path.string());
}

struct Violation {
    DataErrorKind kind;
    std::string firm_id;  // empty for dataset-level violations
    std::string detail;

    friend bool operator==(const Violation&, const Violation&) = default;
};

/// Checks every CompanyRecord invariant without throwing; an empty result
/// means the dataset is usable.
inline std::vector<Violation> validate_dataset(const std::vector<CompanyRecord>& records,
                                               const DatasetConfig& config = {}) {
    std::vector<Violation> report;
    if (records.empty()) {
        report.push_back({DataErrorKind::empty_dataset, {}, "dataset has no records"});
        return report;
    }
    std::unordered_set<std::string> seen;
    std::unordered_set<std::string> reported;
    for (const auto& rec : records) {
        if (!seen.insert(rec.firm_id).second && reported.insert(rec.firm_id).second) {
            report.push_back({DataErrorKind::duplicate_firm_id, rec.firm_id, "firm_id appears more than once"});
        }
        if (rec.tta_pre.size() != config.pre_window()) {
            report.push_back({DataErrorKind::wrong_window_length, rec.firm_id,
                              "tta has " + std::to_string(rec.tta_pre.size()) + " values, expected " +
                                  std::to_string(config.pre_window())});
        }
        for (std::size_t i = 0; i < rec.tta_pre.size(); ++i) {
            if (!(rec.tta_pre[i] > 0.0) || !std::isfinite(rec.tta_pre[i])) {
                const std::string year = i < config.pre_years.size() ? config.pre_years[i] : std::to_string(i);
                report.push_back({DataErrorKind::non_positive_tta, rec.firm_id, "tta_" + year + " is not positive"});
            }
        }
        for (auto kind : kIndicatorKinds) {
            const auto& values = rec.perf(kind);
            if (values.size() != config.post_window()) {
                report.push_back({DataErrorKind::wrong_window_length, rec.firm_id,
                                  std::string(kind_name(kind)) + " has " + std::to_string(values.size()) +
                                      " values, expected " + std::to_string(config.post_window())});
            }
            if (std::any_of(values.begin(), values.end(), [](double v) { return !std::isfinite(v); })) {
                report.push_back(
                    {DataErrorKind::non_numeric_cell, rec.firm_id, std::string(kind_name(kind)) + " has a non-finite value"});
            }
        }
    }
    return report;
}

}  // namespace outlier_perf
