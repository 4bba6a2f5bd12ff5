#include "eigenfolio/backtest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace eigenfolio {
namespace {

std::string label_slug(const std::string& label) {
    std::string slug;
    for (char ch : label) {
        if (std::isalnum(static_cast<unsigned char>(ch)))
            slug.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        else if (!slug.empty() && slug.back() != '_')
            slug.push_back('_');
    }
    while (!slug.empty() && slug.back() == '_') slug.pop_back();
    return slug.empty() ? "portfolio" : slug;
}

}  // namespace

PortfolioWeights equal_weight_benchmark(std::vector<std::string> tickers) {
    if (tickers.empty()) throw std::invalid_argument("equal-weight benchmark needs >= 1 ticker");
    const auto n = static_cast<Eigen::Index>(tickers.size());
    Eigen::VectorXd weights = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    return PortfolioWeights(std::move(weights), std::move(tickers), Normalization::SignedSumOne,
                            Provenance{Provenance::Kind::EqualWeight, {}});
}

BacktestReport run_backtest(const PortfolioWeights& weights, const ReturnTable& test,
                            std::string label, int periods_per_year, double risk_free_daily) {
    if (test.rows() < 2)
        throw std::invalid_argument("run_backtest requires at least 2 test rows");

    std::vector<double> daily = portfolio_return_series(weights, test);
    std::vector<double> cumulative;
    cumulative.reserve(daily.size());
    double growth = 1.0;
    for (double r : daily) {
        growth *= 1.0 + r;
        cumulative.push_back(growth - 1.0);
    }

    std::vector<double> excess = daily;
    if (risk_free_daily != 0.0)
        for (double& r : excess) r -= risk_free_daily;

    PerformanceMetrics metrics;
    bool sharpe_defined = true;
    try {
        metrics = sharpe_ratio(excess, periods_per_year);
    } catch (const std::domain_error&) {
        AnnualizedReturn ret = annualized_return(excess, periods_per_year);
        metrics = PerformanceMetrics{ret.value, annualized_volatility(excess, periods_per_year),
                                     std::numeric_limits<double>::quiet_NaN(), ret.total_loss};
        sharpe_defined = false;
    }

    return BacktestReport{std::move(label),
                          weights,
                          metrics,
                          sharpe_defined,
                          test.dates(),
                          std::move(daily),
                          std::move(cumulative),
                          test.dates().front(),
                          test.dates().back()};
}

ComparisonTable compare(const std::vector<BacktestReport>& reports) {
    if (reports.size() < 2)
        throw std::invalid_argument("compare requires at least 2 backtest reports");
    for (const auto& report : reports)
        if (report.period_start != reports.front().period_start ||
            report.period_end != reports.front().period_end)
            throw std::invalid_argument("backtest reports cover different test periods");

    ComparisonTable table;
    for (const auto& report : reports)
        table.rows.push_back({report.label, report.metrics.annualized_return,
                              report.metrics.annualized_volatility, report.metrics.sharpe,
                              report.sharpe_defined});
    return table;
}

std::string format_percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f%%", fraction * 100.0);
    return buf;
}

std::string format_ratio(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", value);
    return buf;
}

std::string ComparisonTable::to_text() const {
    std::size_t label_width = 9;  // "Portfolio"
    for (const auto& row : rows) label_width = std::max(label_width, row.label.size());

    char line[256];
    std::string text;
    std::snprintf(line, sizeof(line), "%-*s  %17s  %21s  %12s\n",
                  static_cast<int>(label_width), "Portfolio", "Annualized Return",
                  "Annualized Volatility", "Sharpe Ratio");
    text += line;
    for (const auto& row : rows) {
        std::string sharpe = row.sharpe_defined ? format_ratio(row.sharpe) : "n/a";
        std::snprintf(line, sizeof(line), "%-*s  %17s  %21s  %12s\n",
                      static_cast<int>(label_width), row.label.c_str(),
                      format_percent(row.annualized_return).c_str(),
                      format_percent(row.annualized_volatility).c_str(), sharpe.c_str());
        text += line;
    }
    return text;
}

void write_comparison_csv(const ComparisonTable& table, std::ostream& os) {
    os << "portfolio,annualized_return,annualized_volatility,sharpe\n";
    char buf[128];
    for (const auto& row : table.rows) {
        if (row.sharpe_defined)
            std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f", row.annualized_return,
                          row.annualized_volatility, row.sharpe);
        else
            std::snprintf(buf, sizeof(buf), "%.6f,%.6f,", row.annualized_return,
                          row.annualized_volatility);
        os << row.label << ',' << buf << '\n';
    }
}

void write_report_json(const BacktestReport& report, std::ostream& os) {
    nlohmann::ordered_json doc;
    doc["label"] = report.label;
    doc["period"]["start"] = report.period_start.to_string();
    doc["period"]["end"] = report.period_end.to_string();

    nlohmann::ordered_json weights;
    for (Eigen::Index i = 0; i < report.weights.size(); ++i)
        weights[report.weights.tickers()[static_cast<std::size_t>(i)]] =
            report.weights.weights()(i);
    doc["weights"] = std::move(weights);

    doc["metrics"]["annualized_return"] = report.metrics.annualized_return;
    doc["metrics"]["annualized_volatility"] = report.metrics.annualized_volatility;
    doc["metrics"]["sharpe"] = report.sharpe_defined
                                   ? nlohmann::ordered_json(report.metrics.sharpe)
                                   : nlohmann::ordered_json(nullptr);
    doc["metrics"]["total_loss_flag"] = report.metrics.total_loss;

    doc["cumulative"] = nlohmann::ordered_json::array();
    for (std::size_t t = 0; t < report.cumulative.size(); ++t) {
        nlohmann::ordered_json point;
        point["date"] = report.dates[t].to_string();
        point["value"] = report.cumulative[t];
        doc["cumulative"].push_back(std::move(point));
    }
    os << doc.dump(2) << '\n';
}

void write_cumulative_csv(const std::vector<BacktestReport>& reports, std::ostream& os) {
    if (reports.empty()) throw std::invalid_argument("no backtest reports to write");
    for (const auto& report : reports)
        if (report.dates != reports.front().dates)
            throw std::invalid_argument("backtest reports cover different test periods");

    os << "date";
    for (const auto& report : reports) os << ',' << label_slug(report.label);
    os << '\n';
    char buf[32];
    const auto& dates = reports.front().dates;
    for (std::size_t t = 0; t < dates.size(); ++t) {
        os << dates[t].to_string();
        for (const auto& report : reports) {
            std::snprintf(buf, sizeof(buf), "%.6f", report.cumulative[t]);
            os << ',' << buf;
        }
        os << '\n';
    }
}

}  // namespace eigenfolio
