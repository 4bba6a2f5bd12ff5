#include "eigenfolio/market_data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

namespace eigenfolio {
namespace {

std::string trim(const std::string& s) {
    const char* ws = " \t";
    auto begin = s.find_first_not_of(ws);
    if (begin == std::string::npos) return {};
    auto end = s.find_last_not_of(ws);
    return s.substr(begin, end - begin + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

double parse_price(const std::string& cell, const std::string& ticker, const Date& date) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = first + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw std::runtime_error("invalid number '" + cell + "' for '" + ticker + "' on " +
                                 date.to_string());
    if (!std::isfinite(value))
        throw std::runtime_error("non-finite price '" + cell + "' for '" + ticker + "' on " +
                                 date.to_string());
    if (value <= 0.0)
        throw std::runtime_error("non-positive price " + cell + " for '" + ticker + "' on " +
                                 date.to_string());
    return value;
}

void check_labels(const std::vector<Date>& dates, const std::vector<std::string>& tickers) {
    if (tickers.empty()) throw std::invalid_argument("at least one ticker column is required");
    std::unordered_set<std::string> seen;
    for (const auto& ticker : tickers) {
        if (ticker.empty()) throw std::invalid_argument("empty ticker name");
        if (!seen.insert(ticker).second)
            throw std::invalid_argument("duplicate ticker '" + ticker + "'");
    }
    for (std::size_t i = 1; i < dates.size(); ++i) {
        if (dates[i] == dates[i - 1])
            throw std::invalid_argument("duplicate date " + dates[i].to_string());
        if (dates[i] < dates[i - 1])
            throw std::invalid_argument("dates not strictly increasing at " + dates[i].to_string());
    }
}

}  // namespace

PriceTable::PriceTable(std::vector<Date> dates, std::vector<std::string> tickers,
                       Eigen::MatrixXd prices)
    : dates_(std::move(dates)), tickers_(std::move(tickers)), prices_(std::move(prices)) {
    if (prices_.rows() != static_cast<Eigen::Index>(dates_.size()))
        throw std::invalid_argument("price row count does not match date count");
    if (prices_.cols() != static_cast<Eigen::Index>(tickers_.size()))
        throw std::invalid_argument("price column count does not match ticker count");
    if (dates_.empty()) throw std::invalid_argument("price table has no rows");
    check_labels(dates_, tickers_);
    for (Eigen::Index r = 0; r < prices_.rows(); ++r)
        for (Eigen::Index c = 0; c < prices_.cols(); ++c) {
            double v = prices_(r, c);
            if (!std::isfinite(v) || v <= 0.0)
                throw std::invalid_argument("non-positive or non-finite price for '" +
                                            tickers_[static_cast<std::size_t>(c)] + "' on " +
                                            dates_[static_cast<std::size_t>(r)].to_string());
        }
}

ReturnTable::ReturnTable(std::vector<Date> dates, std::vector<std::string> tickers,
                         Eigen::MatrixXd returns)
    : dates_(std::move(dates)), tickers_(std::move(tickers)), returns_(std::move(returns)) {
    if (returns_.rows() != static_cast<Eigen::Index>(dates_.size()))
        throw std::invalid_argument("return row count does not match date count");
    if (returns_.cols() != static_cast<Eigen::Index>(tickers_.size()))
        throw std::invalid_argument("return column count does not match ticker count");
    if (dates_.empty()) throw std::invalid_argument("return table has no rows");
    check_labels(dates_, tickers_);
    for (Eigen::Index r = 0; r < returns_.rows(); ++r)
        for (Eigen::Index c = 0; c < returns_.cols(); ++c) {
            double v = returns_(r, c);
            if (!std::isfinite(v) || v <= -1.0)
                throw std::invalid_argument("invalid return for '" +
                                            tickers_[static_cast<std::size_t>(c)] + "' on " +
                                            dates_[static_cast<std::size_t>(r)].to_string() +
                                            " (must be finite and > -1)");
        }
}

PriceTable load_prices(std::istream& in, MissingPolicy policy) {
    const double missing = std::numeric_limits<double>::quiet_NaN();

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("malformed header: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);  // UTF-8 BOM

    auto header = split_line(line);
    if (lower(trim(header[0])) != "date")
        throw std::runtime_error("malformed header: first column must be 'date', got '" +
                                 trim(header[0]) + "'");
    std::vector<std::string> tickers;
    for (std::size_t i = 1; i < header.size(); ++i) tickers.push_back(trim(header[i]));
    if (tickers.empty()) throw std::runtime_error("malformed header: no ticker columns");
    const std::size_t n = tickers.size();

    std::vector<Date> dates;
    std::vector<double> cells;  // row-major staging buffer, NaN marks a gap
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto fields = split_line(line);
        if (fields.size() != n + 1)
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(n + 1) + " fields, got " +
                                     std::to_string(fields.size()));
        Date date;
        try {
            date = Date::parse(trim(fields[0]));
        } catch (const std::exception& e) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!dates.empty()) {
            if (date == dates.back())
                throw std::runtime_error("duplicate date " + date.to_string());
            if (date < dates.back())
                throw std::runtime_error("dates not strictly increasing at " + date.to_string());
        }
        dates.push_back(date);
        for (std::size_t c = 0; c < n; ++c) {
            std::string cell = trim(fields[c + 1]);
            if (cell.empty()) {
                if (policy == MissingPolicy::Strict)
                    throw std::runtime_error("missing value for '" + tickers[c] + "' on " +
                                             date.to_string() + " (policy strict)");
                cells.push_back(missing);
            } else {
                cells.push_back(parse_price(cell, tickers[c], date));
            }
        }
    }

    const std::size_t rows = dates.size();
    if (rows == 0) throw std::runtime_error("CSV contains no data rows");

    std::size_t start = 0;
    if (policy == MissingPolicy::ForwardFill) {
        // Fill gaps with the last observation, then drop leading rows where
        // some column has not started trading yet.
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t first_obs = rows;
            for (std::size_t r = 0; r < rows; ++r)
                if (!std::isnan(cells[r * n + c])) {
                    first_obs = r;
                    break;
                }
            if (first_obs == rows)
                throw std::runtime_error("column '" + tickers[c] +
                                         "' has no observations (policy forward-fill)");
            start = std::max(start, first_obs);
            for (std::size_t r = first_obs + 1; r < rows; ++r)
                if (std::isnan(cells[r * n + c])) cells[r * n + c] = cells[(r - 1) * n + c];
        }
    }

    Eigen::MatrixXd prices(static_cast<Eigen::Index>(rows - start), static_cast<Eigen::Index>(n));
    for (std::size_t r = start; r < rows; ++r)
        for (std::size_t c = 0; c < n; ++c)
            prices(static_cast<Eigen::Index>(r - start), static_cast<Eigen::Index>(c)) =
                cells[r * n + c];
    std::vector<Date> kept(dates.begin() + static_cast<std::ptrdiff_t>(start), dates.end());
    return PriceTable(std::move(kept), std::move(tickers), std::move(prices));
}

PriceTable load_prices_file(const std::string& path, MissingPolicy policy) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input file '" + path + "'");
    return load_prices(in, policy);
}

void write_prices_csv(const PriceTable& table, std::ostream& os) {
    os << "date";
    for (const auto& ticker : table.tickers()) os << ',' << ticker;
    os << '\n';
    char buf[40];
    for (Eigen::Index r = 0; r < table.rows(); ++r) {
        os << table.dates()[static_cast<std::size_t>(r)].to_string();
        for (Eigen::Index c = 0; c < table.cols(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", table.prices()(r, c));
            os << ',' << buf;
        }
        os << '\n';
    }
}

ReturnTable compute_returns(const PriceTable& prices) {
    if (prices.rows() < 2)
        throw std::invalid_argument("compute_returns requires at least 2 price rows");
    const Eigen::Index m = prices.rows() - 1;
    const auto& p = prices.prices();
    Eigen::MatrixXd r =
        (p.bottomRows(m).array() - p.topRows(m).array()) / p.topRows(m).array();
    std::vector<Date> dates(prices.dates().begin() + 1, prices.dates().end());
    return ReturnTable(std::move(dates), prices.tickers(), std::move(r));
}

std::pair<ReturnTable, ReturnTable> chronological_split(const ReturnTable& returns,
                                                        double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("train_fraction must lie in (0, 1)");
    const Eigen::Index m = returns.rows();
    // Tiny nudge so that fractions like 0.7 * 10 (stored as 6.999...) still
    // land on the intended row count.
    auto k = static_cast<Eigen::Index>(
        std::floor(static_cast<double>(m) * train_fraction + 1e-9));
    if (k < 1 || k >= m)
        throw std::invalid_argument("split leaves an empty train or test set (" +
                                    std::to_string(k) + " of " + std::to_string(m) +
                                    " rows in train)");
    std::vector<Date> train_dates(returns.dates().begin(), returns.dates().begin() + k);
    std::vector<Date> test_dates(returns.dates().begin() + k, returns.dates().end());
    ReturnTable train(std::move(train_dates), returns.tickers(), returns.returns().topRows(k));
    ReturnTable test(std::move(test_dates), returns.tickers(),
                     returns.returns().bottomRows(m - k));
    return {std::move(train), std::move(test)};
}

}  // namespace eigenfolio
