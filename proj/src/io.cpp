#include "epa/io.hpp"

#include "epa/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace epa::io {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_record(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cell += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(trim(cell));
            cell.clear();
        } else {
            cell += c;
        }
    }
    cells.push_back(trim(cell));
    return cells;
}

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

// NaN for missing markers; ParseError for anything else that is not a finite number.
double parse_cell(const std::string& cell, std::size_t row, const std::string& column) {
    if (is_missing_marker(cell)) return kMissing;
    std::string_view text = cell;
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(value)) {
        throw ParseError(row, column, cell);
    }
    return value;
}

const std::string& cell_at(const CsvTable& table, std::size_t r, std::size_t c) {
    static const std::string empty;
    const auto& row = table.rows[r];
    return c < row.size() ? row[c] : empty;
}

std::vector<std::size_t> rows_in_range(const CsvTable& table, const std::optional<DateRange>& dates) {
    std::vector<std::size_t> rows;
    std::optional<std::size_t> date_col;
    if (dates) date_col = table.column_index(dates->column);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (date_col) {
            const std::string& date = cell_at(table, r, *date_col);
            if (dates->from && date < *dates->from) continue;
            if (dates->to && date > *dates->to) continue;
        }
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

NaPolicy parse_na_policy(const std::string& name) {
    if (name == "drop") return NaPolicy::drop;
    if (name == "zero") return NaPolicy::zero;
    throw std::invalid_argument("unknown NA policy '" + name + "' (expected drop or zero)");
}

std::string to_string(NaPolicy policy) { return policy == NaPolicy::drop ? "drop" : "zero"; }

bool is_missing_marker(const std::string& cell) {
    const std::string t = trim(cell);
    return t.empty() || t == "#N/A" || t == "NA";
}

std::size_t CsvTable::column_index(const std::string& name) const {
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == name) return c;
    }
    throw std::invalid_argument("column '" + name + "' not found in CSV header");
}

CsvTable parse_csv(const std::string& text) {
    std::istringstream in(text);
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!have_header) {
            if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
            table.header = split_record(line);
            have_header = true;
            continue;
        }
        if (trim(line).empty()) continue;
        table.rows.push_back(split_record(line));
    }
    if (!have_header) throw std::invalid_argument("CSV input is empty");
    return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open data file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_csv(buffer.str());
}

LossSeries ForecastDataset::differential(std::size_t first, std::size_t second, Loss loss) const {
    if (first >= errors.size() || second >= errors.size()) {
        throw std::out_of_range("forecast column index out of range");
    }
    return loss_differential(errors[first], errors[second], loss);
}

ForecastDataset load_csv(const CsvTable& table, const LoadOptions& options) {
    if (options.forecast_cols.empty()) throw std::invalid_argument("no forecast columns given");
    const std::size_t real_col = table.column_index(options.realization_col);
    std::vector<std::size_t> fc_cols;
    for (const auto& name : options.forecast_cols) fc_cols.push_back(table.column_index(name));
    const std::optional<std::size_t> date_col =
        options.dates ? std::optional<std::size_t>(table.column_index(options.dates->column)) : std::nullopt;

    ForecastDataset data;
    data.forecast_names = options.forecast_cols;
    data.na_policy = options.na_policy;
    data.errors.resize(fc_cols.size());

    const std::vector<std::size_t> rows = rows_in_range(table, options.dates);
    data.rows_in_range = rows.size();
    for (std::size_t r : rows) {
        const std::size_t row_number = r + 1;
        const double realized = parse_cell(cell_at(table, r, real_col), row_number, options.realization_col);
        std::vector<double> errs(fc_cols.size());
        bool complete = !std::isnan(realized);
        for (std::size_t k = 0; k < fc_cols.size(); ++k) {
            const double f = parse_cell(cell_at(table, r, fc_cols[k]), row_number, options.forecast_cols[k]);
            errs[k] = realized - f;
            if (std::isnan(f)) complete = false;
        }
        if (options.na_policy == NaPolicy::drop) {
            if (!complete) continue;
        } else {
            for (double& e : errs) {
                if (std::isnan(e)) e = 0.0;
            }
        }
        for (std::size_t k = 0; k < errs.size(); ++k) data.errors[k].push_back(errs[k]);
        if (date_col) data.dates.push_back(cell_at(table, r, *date_col));
    }
    return data;
}

ForecastDataset load_csv(const std::filesystem::path& path, const LoadOptions& options) {
    return load_csv(read_csv(path), options);
}

std::vector<double> load_series(const CsvTable& table, const std::string& column, NaPolicy policy,
                                const std::optional<DateRange>& dates) {
    const std::size_t col = table.column_index(column);
    std::vector<double> out;
    for (std::size_t r : rows_in_range(table, dates)) {
        const double v = parse_cell(cell_at(table, r, col), r + 1, column);
        if (std::isnan(v)) {
            if (policy == NaPolicy::drop) continue;
            out.push_back(0.0);
        } else {
            out.push_back(v);
        }
    }
    return out;
}

}  // namespace epa::io
