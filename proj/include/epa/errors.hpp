#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace epa {

/// Raised when a long-run variance (or block-mean variance) is not strictly
/// positive, so the studentized statistic is undefined.
class DegenerateVarianceError : public std::runtime_error {
public:
    DegenerateVarianceError(std::string estimator, int bandwidth, double value);

    [[nodiscard]] const std::string& estimator() const noexcept { return estimator_; }
    [[nodiscard]] int bandwidth() const noexcept { return bandwidth_; }
    [[nodiscard]] double value() const noexcept { return value_; }

private:
    std::string estimator_;
    int bandwidth_;
    double value_;
};

/// Raised when a procedure has no critical value for the requested level.
class UnsupportedLevelError : public std::invalid_argument {
public:
    explicit UnsupportedLevelError(double cl);
    [[nodiscard]] double level() const noexcept { return cl_; }

private:
    double cl_;
};

/// CSV ingestion failure with 1-based row (data rows, header excluded) and column name.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t row, std::string column, std::string cell);

    [[nodiscard]] std::size_t row() const noexcept { return row_; }
    [[nodiscard]] const std::string& column() const noexcept { return column_; }
    [[nodiscard]] const std::string& cell() const noexcept { return cell_; }

private:
    std::size_t row_;
    std::string column_;
    std::string cell_;
};

}  // namespace epa
