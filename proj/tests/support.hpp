// Shared fixtures and independent oracles for the test suites.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eigenfolio/backtest.hpp"
#include "eigenfolio/eigensolver.hpp"
#include "eigenfolio/market_data.hpp"
#include "eigenfolio/portfolio.hpp"
#include "eigenfolio/stats.hpp"

namespace test_support {

using namespace eigenfolio;

inline bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

// Runs fn, which must throw; returns the exception message ("" if nothing
// was thrown, so callers can assert on the content).
template <typename Fn>
std::string thrown_message(Fn&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

inline std::vector<std::string> make_tickers(int n) {
    std::vector<std::string> tickers;
    for (int i = 0; i < n; ++i) tickers.push_back("A" + std::to_string(i));
    return tickers;
}

inline std::vector<Date> make_dates(int count, Date start = Date{2020, 1, 1}) {
    std::vector<Date> dates;
    for (int i = 0; i < count; ++i) dates.push_back(advance(start, i));
    return dates;
}

// Independent i.i.d. gaussian return columns (clipped well above -1).
inline ReturnTable make_random_returns(int rows, int cols, unsigned seed, double drift = 0.0004,
                                       double vol = 0.01) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> noise(drift, vol);
    Eigen::MatrixXd r(rows, cols);
    for (int t = 0; t < rows; ++t)
        for (int c = 0; c < cols; ++c) r(t, c) = std::max(noise(rng), -0.9);
    return ReturnTable(make_dates(rows), make_tickers(cols), std::move(r));
}

// Geometric random walk prices starting near 100.
inline PriceTable make_random_prices(int rows, int cols, unsigned seed, double drift = 0.0004,
                                     double vol = 0.01) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> noise(drift, vol);
    Eigen::MatrixXd p(rows, cols);
    for (int c = 0; c < cols; ++c) {
        p(0, c) = 100.0 + c;
        for (int t = 1; t < rows; ++t)
            p(t, c) = p(t - 1, c) * (1.0 + std::max(noise(rng), -0.9));
    }
    return PriceTable(make_dates(rows), make_tickers(cols), std::move(p));
}

// One dominant market factor plus idiosyncratic noise; the leading
// principal component of the correlation matrix recovers the factor.
inline ReturnTable make_one_factor_returns(int rows, int cols, unsigned seed,
                                           double factor_vol = 0.01, double noise_ratio = 0.2,
                                           double drift = 0.0006) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> factor(0.0, factor_vol);
    std::normal_distribution<double> noise(0.0, factor_vol * std::sqrt(noise_ratio));
    std::uniform_real_distribution<double> loading(0.7, 1.3);
    std::vector<double> beta;
    for (int c = 0; c < cols; ++c) beta.push_back(loading(rng));
    Eigen::MatrixXd r(rows, cols);
    for (int t = 0; t < rows; ++t) {
        double f = factor(rng);
        for (int c = 0; c < cols; ++c)
            r(t, c) = std::max(drift + beta[static_cast<std::size_t>(c)] * f + noise(rng), -0.9);
    }
    return ReturnTable(make_dates(rows), make_tickers(cols), std::move(r));
}

inline CorrelationMatrix random_correlation(int assets, int sample_rows, unsigned seed) {
    return correlation_matrix(standardize(make_random_returns(sample_rows, assets, seed)));
}

// ---- independent oracles (deliberately plain, loop-based code) ----

inline double oracle_mean(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

inline double oracle_sample_std(const std::vector<double>& xs) {
    double mean = oracle_mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

inline double oracle_annualized_return(const std::vector<double>& xs, int periods) {
    double growth = 1.0;
    for (double x : xs) growth *= 1.0 + x;
    return std::pow(growth, static_cast<double>(periods) / static_cast<double>(xs.size())) - 1.0;
}

inline double oracle_annualized_vol(const std::vector<double>& xs, int periods) {
    return oracle_sample_std(xs) * std::sqrt(static_cast<double>(periods));
}

inline double oracle_pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    double mx = oracle_mean(xs), my = oracle_mean(ys);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

inline std::vector<double> column(const Eigen::MatrixXd& m, int c) {
    std::vector<double> out;
    for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(m(r, c));
    return out;
}

// Daily returns of fixed weights over a panel, computed with plain loops.
inline std::vector<double> oracle_portfolio_series(const Eigen::MatrixXd& returns,
                                                   const Eigen::VectorXd& weights) {
    std::vector<double> series;
    for (Eigen::Index t = 0; t < returns.rows(); ++t) {
        double r = 0.0;
        for (Eigen::Index c = 0; c < returns.cols(); ++c) r += returns(t, c) * weights(c);
        series.push_back(r);
    }
    return series;
}

}  // namespace test_support
