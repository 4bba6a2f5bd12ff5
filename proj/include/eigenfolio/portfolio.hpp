#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <vector>

#include "eigenfolio/eigensolver.hpp"
#include "eigenfolio/market_data.hpp"

namespace eigenfolio {

/// Weight normalization convention. SignedSumOne divides by the signed sum
/// of the loadings (weights sum to exactly 1, leverage unconstrained);
/// AbsSumOne divides by the sum of absolute values (gross exposure 1).
enum class Normalization { SignedSumOne, AbsSumOne };

/// Where a weight vector came from: a single eigen-component, an ensemble
/// of components, or the equal-weight benchmark.
struct Provenance {
    enum class Kind { EigenComponent, Ensemble, EqualWeight };

    Kind kind = Kind::EqualWeight;
    std::vector<int> components;  // 0-based component indices; empty for equal weight
};

/// Portfolio weight vector over a fixed ticker universe. Normalization is
/// checked on construction: signed weights sum to 1, abs-normalized weights
/// have absolute values summing to 1 (both up to rounding noise that scales
/// with the largest weight). Short positions are allowed either way.
class PortfolioWeights {
public:
    PortfolioWeights(Eigen::VectorXd weights, std::vector<std::string> tickers,
                     Normalization normalization, Provenance provenance);

    const Eigen::VectorXd& weights() const { return weights_; }
    const std::vector<std::string>& tickers() const { return tickers_; }
    Normalization normalization() const { return normalization_; }
    const Provenance& provenance() const { return provenance_; }
    Eigen::Index size() const { return weights_.size(); }

private:
    Eigen::VectorXd weights_;
    std::vector<std::string> tickers_;
    Normalization normalization_;
    Provenance provenance_;
};

/// Annualized geometric return plus a flag marking a wiped-out portfolio
/// (cumulative growth factor indistinguishable from zero; value is pinned
/// at -1 in that case rather than fed through pow()).
struct AnnualizedReturn {
    double value = 0.0;
    bool total_loss = false;
};

/// In-sample or out-of-sample performance summary. sharpe is
/// return / volatility; construction fails when volatility is zero.
struct PerformanceMetrics {
    double annualized_return = 0.0;
    double annualized_volatility = 0.0;
    double sharpe = 0.0;
    bool total_loss = false;
};

inline constexpr int kDefaultPeriodsPerYear = 252;
inline constexpr double kDegenerateSumTol = 1e-6;   // |sum of loadings| below this cannot be signed-normalized
inline constexpr double kZeroVolatilityTol = 1e-12; // volatility at or below this leaves Sharpe undefined
inline constexpr double kTotalLossGrowth = 1e-12;   // growth factor at or below this counts as total loss

/// Bundles metrics, deriving sharpe = ret / vol. Throws std::domain_error
/// ("undefined Sharpe ratio") if vol <= kZeroVolatilityTol.
PerformanceMetrics make_performance_metrics(double annualized_return, double annualized_volatility,
                                            bool total_loss = false);

/// Turns eigenvector column `component` (0-based, for labeling) into a
/// portfolio. Signed mode throws std::runtime_error when the loadings sum
/// to ~0 (|sum| <= 1e-6), because dividing by it would explode the weights.
PortfolioWeights normalize_eigenvector(const Eigen::VectorXd& loadings, Normalization mode,
                                       int component, std::vector<std::string> tickers);

/// Daily portfolio returns r_p[t] = w . R[t] under daily rebalancing to
/// fixed weights. Tickers of weights and panel must match.
std::vector<double> portfolio_return_series(const PortfolioWeights& weights,
                                            const ReturnTable& returns);

/// Geometric annualization: (prod(1 + r))^(periods_per_year / T) - 1.
AnnualizedReturn annualized_return(const std::vector<double>& series,
                                   int periods_per_year = kDefaultPeriodsPerYear);

/// Sample standard deviation (divisor T - 1) scaled by sqrt(periods). A
/// constant series has volatility exactly 0. Requires >= 2 observations.
double annualized_volatility(const std::vector<double>& series,
                             int periods_per_year = kDefaultPeriodsPerYear);

/// Annualized Sharpe ratio of a daily return series. A non-zero
/// risk_free_daily is subtracted from every observation first, so both the
/// return and the volatility are those of the excess series.
PerformanceMetrics sharpe_ratio(const std::vector<double>& series,
                                int periods_per_year = kDefaultPeriodsPerYear,
                                double risk_free_daily = 0.0);

struct RankedEntry {
    int component = 0;  // 0-based index into the decomposition
    PortfolioWeights weights;
    PerformanceMetrics metrics;
};

struct SkippedComponent {
    int component = 0;
    std::string reason;
};

/// Components ordered by in-sample Sharpe, best first (ties broken by the
/// lower component index). Components that cannot be evaluated are listed
/// in `skipped` with the reason.
struct RankedComponents {
    std::vector<RankedEntry> entries;
    std::vector<SkippedComponent> skipped;
};

/// Evaluates every eigen-portfolio on the training panel and sorts by
/// Sharpe. Degenerate normalizations and zero-volatility series are
/// skipped rather than fatal; an empty ranking (everything skipped) throws
/// std::runtime_error.
RankedComponents rank_components(const EigenDecomposition& decomposition,
                                 const ReturnTable& train, Normalization mode,
                                 int periods_per_year = kDefaultPeriodsPerYear,
                                 double risk_free_daily = 0.0);

/// Sharpe-weighted combination of the top n ranked components.
struct EnsembleSpec {
    int n = 0;
    Eigen::VectorXd coefficients;     // alpha_i = S_i / sum(S_j), sums to 1
    std::vector<int> member_indices;  // component ids of the members, rank order
    PortfolioWeights combined;        // signed-sum-one by construction
};

/// Combines the top n entries with coefficients proportional to their
/// Sharpe ratios. All n entries must have strictly positive Sharpe; the
/// members' weights are taken in (or re-normalized to) the signed
/// convention so the combination still sums to 1.
EnsembleSpec ensemble_weights(const RankedComponents& ranked, int n);

struct SweepPoint {
    int n = 0;
    double sharpe = 0.0;  // in-sample Sharpe of the n-component ensemble
};

struct SweepResult {
    int best_n = 0;
    std::vector<SweepPoint> curve;
};

/// Evaluates ensembles of size 1..n_max on the training panel and picks
/// the size with the best in-sample Sharpe (ties go to the smaller size).
/// n_max must not exceed the number of positive-Sharpe components.
SweepResult sweep_ensemble_size(const RankedComponents& ranked, const ReturnTable& train,
                                int n_max, int periods_per_year = kDefaultPeriodsPerYear,
                                double risk_free_daily = 0.0);

struct Position {
    std::string ticker;
    double weight = 0.0;
};

/// Largest long and short positions of a portfolio, each sorted by
/// magnitude (descending) with ties broken by the lower asset index.
struct TopPositions {
    std::vector<Position> longs;
    std::vector<Position> shorts;
};

TopPositions top_positions(const PortfolioWeights& weights, int k);

/// Eigenvalue-scaled variance of a signed-normalized component portfolio,
/// lambda_i / (sum of loadings)^2. Throws for degenerate sums.
double normalized_component_variance(const EigenDecomposition& decomposition, int component);

/// ranking.csv: component id, metrics at 6 decimals, excluded flag.
/// Skipped components appear after the ranked ones with empty metric cells.
void write_ranking_csv(const RankedComponents& ranked, std::ostream& os);

/// Same content as JSON, including skip reasons and total-loss flags.
void write_ranking_json(const RankedComponents& ranked, std::ostream& os);

}  // namespace eigenfolio
