#include "epa/errors.hpp"

#include <sstream>
#include <utility>

namespace epa {

namespace {

std::string degenerate_message(const std::string& estimator, int bandwidth, double value) {
    std::ostringstream os;
    os << "degenerate variance: " << estimator << " estimate at bandwidth " << bandwidth
       << " is " << value << " (must be > 0)";
    return os.str();
}

std::string level_message(double cl) {
    std::ostringstream os;
    os << "unsupported significance level " << cl
       << ": fixed-b critical values are available only for cl = 0.05";
    return os.str();
}

std::string parse_message(std::size_t row, const std::string& column, const std::string& cell) {
    std::ostringstream os;
    os << "cannot parse cell at row " << row << ", column '" << column << "': '" << cell << "'";
    return os.str();
}

}  // namespace

DegenerateVarianceError::DegenerateVarianceError(std::string estimator, int bandwidth, double value)
    : std::runtime_error(degenerate_message(estimator, bandwidth, value)),
      estimator_(std::move(estimator)),
      bandwidth_(bandwidth),
      value_(value) {}

UnsupportedLevelError::UnsupportedLevelError(double cl)
    : std::invalid_argument(level_message(cl)), cl_(cl) {}

ParseError::ParseError(std::size_t row, std::string column, std::string cell)
    : std::runtime_error(parse_message(row, column, cell)),
      row_(row),
      column_(std::move(column)),
      cell_(std::move(cell)) {}

}  // namespace epa
