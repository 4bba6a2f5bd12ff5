#include "eigenfolio/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace eigenfolio {
namespace {

// Rounding headroom for the sum-to-one checks: summing N weights of
// magnitude |w|max leaves an error on the order of N * eps * |w|max, which
// matters for near-degenerate normalizations with very large weights.
double sum_tolerance(const Eigen::VectorXd& w) {
    double scale = w.size() > 0 ? w.cwiseAbs().maxCoeff() : 1.0;
    return 1e-10 * std::max(1.0, scale);
}

double sample_std(const std::vector<double>& series) {
    const auto n = series.size();
    auto [mn, mx] = std::minmax_element(series.begin(), series.end());
    if (*mn == *mx) return 0.0;  // constant series: no spread, exactly zero
    double mean = 0.0;
    for (double x : series) mean += x;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : series) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(n - 1));
}

std::vector<double> excess_series(const std::vector<double>& series, double risk_free_daily) {
    if (risk_free_daily == 0.0) return series;
    std::vector<double> excess(series);
    for (double& r : excess) r -= risk_free_daily;
    return excess;
}

}  // namespace

PortfolioWeights::PortfolioWeights(Eigen::VectorXd weights, std::vector<std::string> tickers,
                                   Normalization normalization, Provenance provenance)
    : weights_(std::move(weights)),
      tickers_(std::move(tickers)),
      normalization_(normalization),
      provenance_(std::move(provenance)) {
    if (weights_.size() == 0) throw std::invalid_argument("empty weight vector");
    if (weights_.size() != static_cast<Eigen::Index>(tickers_.size()))
        throw std::invalid_argument("weight count does not match ticker count");
    if (!weights_.allFinite()) throw std::invalid_argument("non-finite portfolio weight");
    const double tol = sum_tolerance(weights_);
    if (normalization_ == Normalization::SignedSumOne) {
        if (std::abs(weights_.sum() - 1.0) > tol)
            throw std::invalid_argument("signed weights must sum to 1");
    } else {
        if (std::abs(weights_.cwiseAbs().sum() - 1.0) > tol)
            throw std::invalid_argument("absolute weights must sum to 1");
    }
}

PerformanceMetrics make_performance_metrics(double annualized_return,
                                            double annualized_volatility, bool total_loss) {
    if (!std::isfinite(annualized_return) || !std::isfinite(annualized_volatility))
        throw std::invalid_argument("non-finite performance metric");
    if (annualized_volatility < 0.0)
        throw std::invalid_argument("negative annualized volatility");
    if (annualized_volatility <= kZeroVolatilityTol)
        throw std::domain_error("undefined Sharpe ratio: volatility is zero");
    return PerformanceMetrics{annualized_return, annualized_volatility,
                              annualized_return / annualized_volatility, total_loss};
}

PortfolioWeights normalize_eigenvector(const Eigen::VectorXd& loadings, Normalization mode,
                                       int component, std::vector<std::string> tickers) {
    if (loadings.size() == 0) throw std::invalid_argument("empty loading vector");
    double denom;
    if (mode == Normalization::SignedSumOne) {
        denom = loadings.sum();
        if (std::abs(denom) <= kDegenerateSumTol)
            throw std::runtime_error("degenerate normalization for component " +
                                     std::to_string(component) +
                                     ": |sum of loadings| <= 1e-6");
    } else {
        denom = loadings.cwiseAbs().sum();
        if (denom <= 0.0)
            throw std::runtime_error("cannot normalize all-zero loadings for component " +
                                     std::to_string(component));
    }
    return PortfolioWeights(loadings / denom, std::move(tickers), mode,
                            Provenance{Provenance::Kind::EigenComponent, {component}});
}

std::vector<double> portfolio_return_series(const PortfolioWeights& weights,
                                            const ReturnTable& returns) {
    if (weights.tickers() != returns.tickers())
        throw std::invalid_argument("ticker mismatch between weights and return panel");
    Eigen::VectorXd series = returns.returns() * weights.weights();
    return {series.data(), series.data() + series.size()};
}

AnnualizedReturn annualized_return(const std::vector<double>& series, int periods_per_year) {
    if (series.empty()) throw std::invalid_argument("annualized_return requires a non-empty series");
    if (periods_per_year < 1) throw std::invalid_argument("periods_per_year must be >= 1");
    double growth = 1.0;
    for (double r : series) growth *= 1.0 + r;
    if (growth <= kTotalLossGrowth) return {-1.0, true};
    double exponent = static_cast<double>(periods_per_year) / static_cast<double>(series.size());
    return {std::pow(growth, exponent) - 1.0, false};
}

double annualized_volatility(const std::vector<double>& series, int periods_per_year) {
    if (series.size() < 2)
        throw std::invalid_argument("annualized_volatility requires at least 2 observations");
    if (periods_per_year < 1) throw std::invalid_argument("periods_per_year must be >= 1");
    return sample_std(series) * std::sqrt(static_cast<double>(periods_per_year));
}

PerformanceMetrics sharpe_ratio(const std::vector<double>& series, int periods_per_year,
                                double risk_free_daily) {
    if (series.size() < 2)
        throw std::invalid_argument("sharpe_ratio requires at least 2 observations");
    std::vector<double> excess = excess_series(series, risk_free_daily);
    AnnualizedReturn ret = annualized_return(excess, periods_per_year);
    double vol = annualized_volatility(excess, periods_per_year);
    return make_performance_metrics(ret.value, vol, ret.total_loss);
}

RankedComponents rank_components(const EigenDecomposition& decomposition,
                                 const ReturnTable& train, Normalization mode,
                                 int periods_per_year, double risk_free_daily) {
    if (decomposition.tickers() != train.tickers())
        throw std::invalid_argument("ticker mismatch between decomposition and return panel");
    if (train.rows() < 2)
        throw std::invalid_argument("rank_components requires at least 2 training rows");

    RankedComponents out;
    const int n = static_cast<int>(decomposition.size());
    for (int i = 0; i < n; ++i) {
        try {
            PortfolioWeights weights = normalize_eigenvector(decomposition.eigenvectors().col(i),
                                                             mode, i, decomposition.tickers());
            std::vector<double> series = portfolio_return_series(weights, train);
            out.entries.push_back(
                {i, std::move(weights), sharpe_ratio(series, periods_per_year, risk_free_daily)});
        } catch (const std::domain_error&) {
            out.skipped.push_back({i, "zero volatility on the training window"});
        } catch (const std::runtime_error&) {
            out.skipped.push_back({i, "degenerate normalization"});
        }
    }
    if (out.entries.empty())
        throw std::runtime_error("all components were excluded from the ranking");

    std::sort(out.entries.begin(), out.entries.end(),
              [](const RankedEntry& a, const RankedEntry& b) {
                  if (a.metrics.sharpe != b.metrics.sharpe)
                      return a.metrics.sharpe > b.metrics.sharpe;
                  return a.component < b.component;
              });
    return out;
}

EnsembleSpec ensemble_weights(const RankedComponents& ranked, int n) {
    const int count = static_cast<int>(ranked.entries.size());
    if (n < 1 || n > count)
        throw std::invalid_argument("ensemble size n must lie in [1, " + std::to_string(count) +
                                    "], got " + std::to_string(n));
    double sharpe_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double s = ranked.entries[static_cast<std::size_t>(i)].metrics.sharpe;
        if (s <= 0.0)
            throw std::runtime_error(
                "ensemble members need positive Sharpe; component " +
                std::to_string(ranked.entries[static_cast<std::size_t>(i)].component) +
                " has Sharpe " + std::to_string(s));
        sharpe_sum += s;
    }

    const auto& tickers = ranked.entries.front().weights.tickers();
    Eigen::VectorXd coefficients(n);
    Eigen::VectorXd combined = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(tickers.size()));
    std::vector<int> members;
    for (int i = 0; i < n; ++i) {
        const RankedEntry& entry = ranked.entries[static_cast<std::size_t>(i)];
        coefficients(i) = entry.metrics.sharpe / sharpe_sum;
        // Members evaluated under the abs convention are re-normalized to
        // signed-sum-one (a pure rescale) so the mix still sums to 1.
        Eigen::VectorXd member =
            entry.weights.normalization() == Normalization::SignedSumOne
                ? entry.weights.weights()
                : normalize_eigenvector(entry.weights.weights(), Normalization::SignedSumOne,
                                        entry.component, tickers)
                      .weights();
        combined += coefficients(i) * member;
        members.push_back(entry.component);
    }
    PortfolioWeights weights(std::move(combined), tickers, Normalization::SignedSumOne,
                             Provenance{Provenance::Kind::Ensemble, members});
    return EnsembleSpec{n, std::move(coefficients), std::move(members), std::move(weights)};
}

SweepResult sweep_ensemble_size(const RankedComponents& ranked, const ReturnTable& train,
                                int n_max, int periods_per_year, double risk_free_daily) {
    int positive = 0;
    for (const auto& entry : ranked.entries)
        if (entry.metrics.sharpe > 0.0) ++positive;
    if (positive == 0)
        throw std::runtime_error("no positive-Sharpe components available for an ensemble");
    if (n_max < 1 || n_max > positive)
        throw std::invalid_argument("n_max must lie in [1, " + std::to_string(positive) +
                                    "] (positive-Sharpe components), got " + std::to_string(n_max));

    SweepResult result;
    double best_sharpe = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        EnsembleSpec spec = ensemble_weights(ranked, n);
        std::vector<double> series = portfolio_return_series(spec.combined, train);
        PerformanceMetrics metrics = sharpe_ratio(series, periods_per_year, risk_free_daily);
        result.curve.push_back({n, metrics.sharpe});
        if (result.best_n == 0 || metrics.sharpe > best_sharpe) {  // strict >: ties keep smaller n
            result.best_n = n;
            best_sharpe = metrics.sharpe;
        }
    }
    return result;
}

TopPositions top_positions(const PortfolioWeights& weights, int k) {
    if (k < 1) throw std::invalid_argument("top_positions requires k >= 1");
    std::vector<std::pair<double, Eigen::Index>> longs, shorts;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        double w = weights.weights()(i);
        if (w > 0.0) longs.emplace_back(w, i);
        else if (w < 0.0) shorts.emplace_back(w, i);
    }
    auto by_magnitude = [](const std::pair<double, Eigen::Index>& a,
                           const std::pair<double, Eigen::Index>& b) {
        double ma = std::abs(a.first), mb = std::abs(b.first);
        if (ma != mb) return ma > mb;
        return a.second < b.second;
    };
    std::sort(longs.begin(), longs.end(), by_magnitude);
    std::sort(shorts.begin(), shorts.end(), by_magnitude);

    TopPositions out;
    for (std::size_t i = 0; i < longs.size() && i < static_cast<std::size_t>(k); ++i)
        out.longs.push_back(
            {weights.tickers()[static_cast<std::size_t>(longs[i].second)], longs[i].first});
    for (std::size_t i = 0; i < shorts.size() && i < static_cast<std::size_t>(k); ++i)
        out.shorts.push_back(
            {weights.tickers()[static_cast<std::size_t>(shorts[i].second)], shorts[i].first});
    return out;
}

double normalized_component_variance(const EigenDecomposition& decomposition, int component) {
    if (component < 0 || component >= decomposition.size())
        throw std::invalid_argument("component index out of range");
    double sum = decomposition.eigenvectors().col(component).sum();
    if (std::abs(sum) <= kDegenerateSumTol)
        throw std::runtime_error("degenerate normalization for component " +
                                 std::to_string(component) + ": |sum of loadings| <= 1e-6");
    return decomposition.eigenvalues()(component) / (sum * sum);
}

void write_ranking_csv(const RankedComponents& ranked, std::ostream& os) {
    os << "component,annualized_return,annualized_volatility,sharpe,excluded\n";
    char buf[128];
    for (const auto& entry : ranked.entries) {
        std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%.6f,false", entry.component,
                      entry.metrics.annualized_return, entry.metrics.annualized_volatility,
                      entry.metrics.sharpe);
        os << buf << '\n';
    }
    for (const auto& skipped : ranked.skipped) os << skipped.component << ",,,,true\n";
}

void write_ranking_json(const RankedComponents& ranked, std::ostream& os) {
    nlohmann::ordered_json doc;
    doc["entries"] = nlohmann::ordered_json::array();
    for (const auto& entry : ranked.entries) {
        nlohmann::ordered_json row;
        row["component"] = entry.component;
        row["annualized_return"] = entry.metrics.annualized_return;
        row["annualized_volatility"] = entry.metrics.annualized_volatility;
        row["sharpe"] = entry.metrics.sharpe;
        row["total_loss_flag"] = entry.metrics.total_loss;
        doc["entries"].push_back(std::move(row));
    }
    doc["skipped"] = nlohmann::ordered_json::array();
    for (const auto& skipped : ranked.skipped) {
        nlohmann::ordered_json row;
        row["component"] = skipped.component;
        row["reason"] = skipped.reason;
        doc["skipped"].push_back(std::move(row));
    }
    os << doc.dump(2) << '\n';
}

}  // namespace eigenfolio
