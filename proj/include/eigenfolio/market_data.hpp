#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "eigenfolio/date.hpp"

namespace eigenfolio {

/// How to treat empty price cells when loading a CSV.
enum class MissingPolicy {
    Strict,       // any missing cell is an error
    ForwardFill,  // carry the last observation forward; drop leading rows
                  // until every column has at least one observation
};

/// Dated T x N panel of strictly positive asset prices. Rows are trading
/// days in strictly increasing date order, columns are assets.
class PriceTable {
public:
    PriceTable(std::vector<Date> dates, std::vector<std::string> tickers, Eigen::MatrixXd prices);

    const std::vector<Date>& dates() const { return dates_; }
    const std::vector<std::string>& tickers() const { return tickers_; }
    const Eigen::MatrixXd& prices() const { return prices_; }
    Eigen::Index rows() const { return prices_.rows(); }
    Eigen::Index cols() const { return prices_.cols(); }

private:
    std::vector<Date> dates_;
    std::vector<std::string> tickers_;
    Eigen::MatrixXd prices_;
};

/// Dated M x N panel of simple (linear) returns. Each row is stamped with
/// the later of the two price dates that produced it. Entries are finite
/// and greater than -1 (a -100% day would wipe out the position).
class ReturnTable {
public:
    ReturnTable(std::vector<Date> dates, std::vector<std::string> tickers, Eigen::MatrixXd returns);

    const std::vector<Date>& dates() const { return dates_; }
    const std::vector<std::string>& tickers() const { return tickers_; }
    const Eigen::MatrixXd& returns() const { return returns_; }
    Eigen::Index rows() const { return returns_.rows(); }
    Eigen::Index cols() const { return returns_.cols(); }

private:
    std::vector<Date> dates_;
    std::vector<std::string> tickers_;
    Eigen::MatrixXd returns_;
};

/// Parses a price CSV (header "date,TICKER,...", ISO dates, one row per
/// trading day). Throws std::runtime_error with the offending ticker/date
/// on malformed input, missing values (strict policy), non-positive
/// prices, duplicate or out-of-order dates.
PriceTable load_prices(std::istream& in, MissingPolicy policy = MissingPolicy::Strict);
PriceTable load_prices_file(const std::string& path, MissingPolicy policy = MissingPolicy::Strict);

/// Writes a table in the same CSV format with full (%.17g) precision, so
/// that load_prices(write_prices_csv(t)) reproduces t exactly.
void write_prices_csv(const PriceTable& table, std::ostream& os);

/// Simple returns R[t,i] = (P[t+1,i] - P[t,i]) / P[t,i]; output has one
/// row fewer than the input. Requires at least 2 price rows.
ReturnTable compute_returns(const PriceTable& prices);

/// Splits rows chronologically: the first floor(rows * train_fraction)
/// rows form the training set, the rest the test set. Both parts must be
/// non-empty; train_fraction must lie in (0, 1).
std::pair<ReturnTable, ReturnTable> chronological_split(const ReturnTable& returns,
                                                        double train_fraction);

}  // namespace eigenfolio
