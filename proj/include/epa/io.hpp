#pragma once

#include "epa/series.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace epa::io {

/// drop: listwise deletion of rows with any missing cell in the used columns.
/// zero: forecast errors that cannot be formed are set to 0.
enum class NaPolicy { drop, zero };

[[nodiscard]] NaPolicy parse_na_policy(const std::string& name);
[[nodiscard]] std::string to_string(NaPolicy policy);

/// Cells equal to one of these (after trimming) are missing.
[[nodiscard]] bool is_missing_marker(const std::string& cell);

/// Header plus raw string cells. Quoted fields may contain commas and doubled quotes.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Throws std::invalid_argument naming the column when absent.
    [[nodiscard]] std::size_t column_index(const std::string& name) const;
};

[[nodiscard]] CsvTable read_csv(const std::filesystem::path& path);
[[nodiscard]] CsvTable parse_csv(const std::string& text);

/// Inclusive range on a date column, compared as strings ("2007:01" <= x <= "2016:04").
struct DateRange {
    std::string column;
    std::optional<std::string> from;
    std::optional<std::string> to;
};

struct LoadOptions {
    std::vector<std::string> forecast_cols;
    std::string realization_col;
    NaPolicy na_policy = NaPolicy::drop;
    std::optional<DateRange> dates;
};

/// Forecast errors e_i = realization - forecast_i, one sequence per forecast column.
struct ForecastDataset {
    std::vector<std::string> forecast_names;
    std::vector<std::vector<double>> errors;
    /// Values of the date column for retained rows, empty without a date range.
    std::vector<std::string> dates;
    NaPolicy na_policy = NaPolicy::drop;
    /// Rows inside the date range before the policy was applied.
    std::size_t rows_in_range = 0;

    [[nodiscard]] std::size_t size() const noexcept { return errors.empty() ? 0 : errors.front().size(); }
    /// Loss differential L(e_first) - L(e_second) between two forecast columns.
    [[nodiscard]] LossSeries differential(std::size_t first, std::size_t second, Loss loss) const;
};

/// Unparseable cells throw ParseError with the 1-based data row and column name.
[[nodiscard]] ForecastDataset load_csv(const std::filesystem::path& path, const LoadOptions& options);
[[nodiscard]] ForecastDataset load_csv(const CsvTable& table, const LoadOptions& options);

/// A precomputed loss differential column. Missing cells are dropped or zeroed per policy.
[[nodiscard]] std::vector<double> load_series(const CsvTable& table, const std::string& column, NaPolicy policy,
                                              const std::optional<DateRange>& dates = std::nullopt);

}  // namespace epa::io
