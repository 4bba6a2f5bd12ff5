#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "eigenfolio/portfolio.hpp"

namespace eigenfolio {

/// Result of running one weight vector over a held-out return panel:
/// per-day returns, the compounded cumulative path (same length, value t is
/// the total return from the start through day t), and summary metrics.
/// When the test window has zero volatility the Sharpe ratio is undefined;
/// sharpe_defined is false and metrics.sharpe is NaN, but the return and
/// volatility fields are still filled in.
struct BacktestReport {
    std::string label;
    PortfolioWeights weights;
    PerformanceMetrics metrics;
    bool sharpe_defined = true;
    std::vector<Date> dates;
    std::vector<double> daily_returns;
    std::vector<double> cumulative;
    Date period_start;
    Date period_end;
};

/// 1/N benchmark over the given universe (signed convention).
PortfolioWeights equal_weight_benchmark(std::vector<std::string> tickers);

/// Evaluates fixed weights on a test panel (daily rebalancing). The
/// risk-free rate, if non-zero, is subtracted from the daily series before
/// the metrics are computed; the cumulative path stays raw.
BacktestReport run_backtest(const PortfolioWeights& weights, const ReturnTable& test,
                            std::string label, int periods_per_year = kDefaultPeriodsPerYear,
                            double risk_free_daily = 0.0);

struct ComparisonRow {
    std::string label;
    double annualized_return = 0.0;
    double annualized_volatility = 0.0;
    double sharpe = 0.0;  // NaN when undefined
    bool sharpe_defined = true;
};

/// Side-by-side metric table for reports that share a test period.
struct ComparisonTable {
    std::vector<ComparisonRow> rows;

    /// Human-readable table: returns and volatilities as percentages with
    /// 2 decimals, Sharpe as a plain ratio with 2 decimals.
    std::string to_text() const;
};

/// Builds the table; all reports must cover the identical test period.
ComparisonTable compare(const std::vector<BacktestReport>& reports);

std::string format_percent(double fraction);  // 0.1086 -> "10.86%"
std::string format_ratio(double value);       // 0.987  -> "0.99"

/// comparison.csv: label plus raw (unformatted) metrics at 6 decimals.
void write_comparison_csv(const ComparisonTable& table, std::ostream& os);

/// Full report as JSON: label, period, weights by ticker, metrics
/// (sharpe null when undefined), and the dated cumulative path.
void write_report_json(const BacktestReport& report, std::ostream& os);

/// cumulative.csv: one date column plus one column per report (label
/// slugs as headers). Reports must share their date axis.
void write_cumulative_csv(const std::vector<BacktestReport>& reports, std::ostream& os);

}  // namespace eigenfolio
