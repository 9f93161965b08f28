#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace outlier_perf {

/// Failure categories raised while reading or deriving firm data.
enum class DataErrorKind {
    io,
    missing_column,
    non_positive_tta,
    non_numeric_cell,
    duplicate_firm_id,
    empty_dataset,
    wrong_field_count,
    wrong_window_length,
};

inline const char* to_string(DataErrorKind kind) {
    switch (kind) {
        case DataErrorKind::io: return "IoError";
        case DataErrorKind::missing_column: return "MissingColumn";
        case DataErrorKind::non_positive_tta: return "NonPositiveTta";
        case DataErrorKind::non_numeric_cell: return "NonNumericCell";
        case DataErrorKind::duplicate_firm_id: return "DuplicateFirmId";
        case DataErrorKind::empty_dataset: return "EmptyDataset";
        case DataErrorKind::wrong_field_count: return "WrongFieldCount";
        case DataErrorKind::wrong_window_length: return "WrongWindowLength";
    }
    return "DataError";
}

/// Invalid input data. Carries the file line (1-based, 0 when unknown) and
/// the offending column or firm so the CLI can point at the cell.
class DataError : public std::runtime_error {
public:
    DataError(DataErrorKind kind, std::string detail, std::size_t line = 0, std::string column = {})
        : std::runtime_error(format(kind, detail, line, column)),
          kind_(kind),
          line_(line),
          column_(std::move(column)) {}

    [[nodiscard]] DataErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] const std::string& column() const noexcept { return column_; }

private:
    static std::string format(DataErrorKind kind, const std::string& detail, std::size_t line,
                              const std::string& column) {
        std::string msg = to_string(kind);
        if (line > 0) msg += " at line " + std::to_string(line);
        if (!column.empty()) msg += ", column '" + column + "'";
        if (!detail.empty()) msg += ": " + detail;
        return msg;
    }

    DataErrorKind kind_;
    std::size_t line_;
    std::string column_;
};

/// Precondition violations in the statistics layer (empty sample, zero mean,
/// negative stdev, ...).
class StatsError : public std::invalid_argument {
public:
    enum class Kind { empty_sample, zero_mean, zero_stdev, negative_stdev, non_positive_k };

    StatsError(Kind kind, const std::string& what) : std::invalid_argument(what), kind_(kind) {}

    [[nodiscard]] Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Fixture constraints that cannot be met together.
class InfeasibleConstraints : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace outlier_perf
