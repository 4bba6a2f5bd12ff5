// Acceptance suite: prints one [PASS]/[FAIL] line per criterion and exits
// non-zero if anything failed. Each criterion is self-contained.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "support.hpp"

using namespace eigenfolio;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void require(bool condition, const std::string& message) {
    if (!condition) throw std::runtime_error(message);
}

void criterion(int id, const char* name, double time_limit_seconds,
               const std::function<void()>& body) {
    auto begin = std::chrono::steady_clock::now();
    try {
        body();
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
        if (time_limit_seconds > 0.0 && elapsed > time_limit_seconds)
            throw std::runtime_error("runtime " + std::to_string(elapsed) + "s exceeds " +
                                     std::to_string(time_limit_seconds) + "s");
        std::printf("[PASS] criterion %d: %s (%.2fs)\n", id, name, elapsed);
    } catch (const std::exception& e) {
        ++failures;
        std::printf("[FAIL] criterion %d: %s -- %s\n", id, name, e.what());
    }
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// |a - b| <= tol * max(1, |b|): absolute for small values, relative for big
bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

struct MetricRow {
    int component;
    double annualized_return;
    double annualized_volatility;
    double sharpe;
};

// In-sample eigen-portfolio metrics for a 30-asset training window, frozen as regression targets.
const std::vector<MetricRow> kReferenceRanking = {
    {28, 2.434612, 1.576678, 1.544140},   {0, 0.176736, 0.142872, 1.237029},
    {1, 0.202403, 0.400229, 0.505717},    {2, 0.157184, 0.452778, 0.347156},
    {20, 0.338361, 1.080644, 0.313110},   {17, 0.001927, 0.869588, 0.002216},
    {24, -1.000000, 21.857259, -0.045751}, {15, -1.000000, 14.337079, -0.069749},
    {27, -0.271841, 2.452422, -0.110846}, {9, -0.228341, 1.346807, -0.169543},
    {21, -0.421951, 2.404992, -0.175448}, {10, -0.999998, 5.298901, -0.188718},
    {5, -0.133552, 0.691459, -0.193146},  {8, -0.999412, 4.495682, -0.222305},
    {25, -0.804200, 2.987966, -0.269146}, {13, -0.992816, 3.578139, -0.277467},
    {16, -0.999438, 3.376408, -0.296006}, {7, -0.208852, 0.675296, -0.309275},
    {6, -0.196401, 0.583769, -0.336437},  {12, -0.792039, 1.651738, -0.479519},
};

void criterion_metric_consistency() {
    require(kReferenceRanking.size() == 20, "expected 20 reference rows");
    for (const auto& row : kReferenceRanking) {
        double ratio = row.annualized_return / row.annualized_volatility;
        require(close(ratio, row.sharpe, 5e-4),
                "component " + std::to_string(row.component) + ": ratio " +
                    std::to_string(ratio) + " vs reference Sharpe " +
                    std::to_string(row.sharpe));
        // the same identity the library maintains internally
        PerformanceMetrics m =
            make_performance_metrics(row.annualized_return, row.annualized_volatility);
        require(close(m.sharpe, row.sharpe, 5e-4), "make_performance_metrics disagrees");
    }
}

void criterion_eigensolver_suite() {
    for (unsigned seed = 0; seed < 100; ++seed) {
        CorrelationMatrix corr = test_support::random_correlation(30, 90, 1000 + seed);
        EigenDecomposition d = eigendecompose(corr);

        Eigen::MatrixXd rebuilt =
            d.eigenvectors() * d.eigenvalues().asDiagonal() * d.eigenvectors().transpose();
        double reconstruction = (rebuilt - corr.matrix()).cwiseAbs().maxCoeff();
        require(reconstruction < 1e-10,
                "seed " + std::to_string(seed) + ": reconstruction error " +
                    std::to_string(reconstruction));

        Eigen::MatrixXd gram = d.eigenvectors().transpose() * d.eigenvectors();
        gram.diagonal().array() -= 1.0;
        double orthogonality = gram.cwiseAbs().maxCoeff();
        require(orthogonality < 1e-10,
                "seed " + std::to_string(seed) + ": orthogonality error " +
                    std::to_string(orthogonality));

        double trace = 0.0;
        for (Eigen::Index i = 0; i < d.size(); ++i) {
            require(d.eigenvalues()(i) >= 0.0, "negative eigenvalue escaped the clamp");
            if (i > 0)
                require(d.eigenvalues()(i) <= d.eigenvalues()(i - 1),
                        "eigenvalues not descending");
            trace += d.eigenvalues()(i);
        }
        require(close(trace, 30.0, 1e-8),
                "seed " + std::to_string(seed) + ": trace " + std::to_string(trace));
    }
}

void criterion_variance_identity() {
    for (unsigned seed = 0; seed < 20; ++seed) {
        ReturnTable returns = test_support::make_random_returns(500, 10, 2000 + seed);
        StandardizedReturns standardized = standardize(returns);
        EigenDecomposition d = eigendecompose(correlation_matrix(standardized));
        FactorScores scores = project(standardized, d, 10);

        for (int i = 0; i < 10; ++i) {
            auto column = test_support::column(scores.scores, i);
            double std_dev = test_support::oracle_sample_std(column);
            double variance = std_dev * std_dev;
            double lambda = d.eigenvalues()(i);
            require(std::abs(variance - lambda) <= 1e-8 * lambda,
                    "seed " + std::to_string(seed) + " component " + std::to_string(i) +
                        ": score variance " + std::to_string(variance) + " vs eigenvalue " +
                        std::to_string(lambda));
        }
    }
}

void criterion_cev_properties() {
    // identity correlation: every component carries 1/N of the variance
    EigenDecomposition identity = eigendecompose(
        CorrelationMatrix(Eigen::MatrixXd::Identity(10, 10), test_support::make_tickers(10)));
    for (int k = 1; k <= 10; ++k)
        require(close(cumulative_explained_variance(identity, k), k / 10.0, 1e-12),
                "identity CEV(" + std::to_string(k) + ") != k/N");

    EigenDecomposition d = eigendecompose(test_support::random_correlation(12, 250, 321));
    double previous = 0.0;
    for (int k = 1; k <= 12; ++k) {
        double cev = cumulative_explained_variance(d, k);
        require(cev >= previous, "CEV decreased at k=" + std::to_string(k));
        previous = cev;
    }
    require(cumulative_explained_variance(d, 12) == 1.0, "CEV(N) != 1 exactly");
}

void criterion_sharpe_oracle() {
    std::mt19937 rng(77);
    std::normal_distribution<double> noise(0.0005, 0.012);
    std::uniform_int_distribution<int> length(30, 400);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> series(static_cast<std::size_t>(length(rng)));
        for (double& r : series) r = std::max(noise(rng), -0.5);

        double expected_return = test_support::oracle_annualized_return(series, 252);
        double expected_vol = test_support::oracle_annualized_vol(series, 252);
        AnnualizedReturn ret = annualized_return(series);
        require(!ret.total_loss, "unexpected total-loss flag");
        require(close_rel(ret.value, expected_return, 1e-12), "annualized return off oracle");
        require(close_rel(annualized_volatility(series), expected_vol, 1e-12),
                "annualized volatility off oracle");
        PerformanceMetrics m = sharpe_ratio(series);
        require(close_rel(m.sharpe, expected_return / expected_vol, 1e-12),
                "sharpe off oracle");
    }

    std::vector<double> constant(40, 0.0007);
    require(annualized_volatility(constant) == 0.0, "constant series volatility not 0");
    bool threw = false;
    try {
        sharpe_ratio(constant);
    } catch (const std::domain_error& e) {
        threw = std::string(e.what()).find("undefined Sharpe") != std::string::npos;
    }
    require(threw, "constant series did not raise the undefined-Sharpe error");

    AnnualizedReturn wiped = annualized_return({0.02, -1.0, 0.01});
    require(wiped.total_loss && wiped.value == -1.0, "-100% day not clamped and flagged");
}

void criterion_ensemble_conservation() {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> load(-1.0, 1.0);
    std::uniform_real_distribution<double> sharpe_dist(0.1, 2.0);

    for (int trial = 0; trial < 10; ++trial) {
        const int assets = 6 + trial % 3;
        const int count = 3 + trial % 4;
        auto tickers = test_support::make_tickers(assets);

        std::vector<double> sharpes;
        for (int i = 0; i < count; ++i) sharpes.push_back(sharpe_dist(rng));
        std::sort(sharpes.rbegin(), sharpes.rend());  // ranked order, best first

        RankedComponents ranked;
        for (int i = 0; i < count; ++i) {
            Eigen::VectorXd loadings(assets);
            do {
                for (int a = 0; a < assets; ++a) loadings(a) = load(rng);
            } while (std::abs(loadings.sum()) <= 1e-3);  // keep well away from degenerate
            PortfolioWeights weights =
                normalize_eigenvector(loadings, Normalization::SignedSumOne, i, tickers);
            ranked.entries.push_back(
                {i, std::move(weights),
                 PerformanceMetrics{sharpes[static_cast<std::size_t>(i)] * 0.2, 0.2,
                                    sharpes[static_cast<std::size_t>(i)], false}});
        }

        for (int n = 1; n <= count; ++n) {
            EnsembleSpec spec = ensemble_weights(ranked, n);
            double alpha_sum = 0.0;
            for (int i = 0; i < n; ++i) alpha_sum += spec.coefficients(i);
            require(close(alpha_sum, 1.0, 1e-12),
                    "trial " + std::to_string(trial) + " n=" + std::to_string(n) +
                        ": alpha sum " + std::to_string(alpha_sum));
            double weight_sum = spec.combined.weights().sum();
            require(close(weight_sum, 1.0, 1e-10),
                    "trial " + std::to_string(trial) + " n=" + std::to_string(n) +
                        ": weight sum " + std::to_string(weight_sum));
        }
    }

    // reference top-4 Sharpe values reproduce the expected mixing weights
    RankedComponents reference;
    const double top4[4] = {1.544140, 1.237029, 0.505717, 0.347156};
    auto tickers = test_support::make_tickers(4);
    for (int i = 0; i < 4; ++i) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(4);
        w(i) = 1.0;
        reference.entries.push_back(
            {i, PortfolioWeights(w, tickers, Normalization::SignedSumOne, {}),
             PerformanceMetrics{top4[i] * 0.2, 0.2, top4[i], false}});
    }
    EnsembleSpec spec = ensemble_weights(reference, 4);
    const double expected[4] = {0.42491, 0.34040, 0.13916, 0.09553};
    for (int i = 0; i < 4; ++i)
        require(close(spec.coefficients(i), expected[i], 1e-4),
                "alpha_" + std::to_string(i) + " = " + std::to_string(spec.coefficients(i)) +
                    " vs expected " + std::to_string(expected[i]));
}

void criterion_planted_factor() {
    ReturnTable returns = test_support::make_one_factor_returns(750, 20, 4242);
    auto [train, test] = chronological_split(returns, 0.8);
    StandardizedReturns standardized = standardize(train);
    EigenDecomposition d = eigendecompose(correlation_matrix(standardized));

    double ev1 = cumulative_explained_variance(d, 1);
    require(ev1 > 0.5, "first component explains only " + std::to_string(ev1));

    PortfolioWeights ew = equal_weight_benchmark(test.tickers());
    BacktestReport report = run_backtest(ew, test, "Equal Weight");
    std::vector<double> series =
        test_support::oracle_portfolio_series(test.returns(), ew.weights());
    double expected_return = test_support::oracle_annualized_return(series, 252);
    double expected_vol = test_support::oracle_annualized_vol(series, 252);
    require(close_rel(report.metrics.annualized_return, expected_return, 1e-10),
            "equal-weight return off oracle");
    require(close_rel(report.metrics.annualized_volatility, expected_vol, 1e-10),
            "equal-weight volatility off oracle");
    require(close_rel(report.metrics.sharpe, expected_return / expected_vol, 1e-10),
            "equal-weight sharpe off oracle");
}

void criterion_split_protocol() {
    ReturnTable returns = test_support::make_random_returns(1000, 4, 31415);
    auto [train, test] = chronological_split(returns, 0.8);
    require(train.rows() == 800, "train rows != 800");
    require(test.rows() == 200, "test rows != 200");

    // concatenating the halves reproduces the original panel exactly
    require(std::equal(train.dates().begin(), train.dates().end(), returns.dates().begin()),
            "train dates differ from the head of the panel");
    require(std::equal(test.dates().begin(), test.dates().end(),
                       returns.dates().begin() + 800),
            "test dates differ from the tail of the panel");
    for (Eigen::Index c = 0; c < returns.cols(); ++c) {
        for (Eigen::Index t = 0; t < 800; ++t)
            require(train.returns()(t, c) == returns.returns()(t, c), "train cell mismatch");
        for (Eigen::Index t = 0; t < 200; ++t)
            require(test.returns()(t, c) == returns.returns()(800 + t, c), "test cell mismatch");
    }
    require(train.dates().back() < test.dates().front(), "train bleeds into test");
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::map<std::string, std::string> snapshot_dir(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir))
        if (entry.is_regular_file())
            files[fs::relative(entry.path(), dir).string()] = read_file(entry.path());
    return files;
}

void criterion_cli_determinism() {
#ifndef EIGENFOLIO_CLI
    throw std::runtime_error("CLI path not configured at build time");
#else
    fs::path root = fs::temp_directory_path() /
                    ("eigenfolio_acceptance_" +
                     std::to_string(static_cast<unsigned>(std::random_device{}())));
    fs::create_directories(root);
    struct Cleanup {
        fs::path path;
        ~Cleanup() {
            std::error_code ec;
            fs::remove_all(path, ec);
        }
    } cleanup{root};

    // one-factor prices so every strategy (including the ensemble) runs
    ReturnTable returns = test_support::make_one_factor_returns(149, 6, 8080);
    Eigen::MatrixXd prices(150, 6);
    for (int c = 0; c < 6; ++c) prices(0, c) = 100.0 + c;
    for (int t = 1; t < 150; ++t)
        for (int c = 0; c < 6; ++c)
            prices(t, c) = prices(t - 1, c) * (1.0 + returns.returns()(t - 1, c));
    PriceTable table(test_support::make_dates(150), returns.tickers(), std::move(prices));
    fs::path input = root / "prices.csv";
    {
        std::ofstream os(input, std::ios::binary);
        write_prices_csv(table, os);
    }

    fs::path out_dir = root / "out";
    auto invoke = [&](const std::string& stdout_name) {
        std::string cmd = std::string("\"") + EIGENFOLIO_CLI + "\" backtest --input \"" +
                          input.string() + "\" --out \"" + out_dir.string() +
                          "\" --strategy all > \"" + (root / stdout_name).string() + "\" 2>&1";
        return std::system(cmd.c_str());
    };

    require(invoke("stdout1.txt") == 0, "first CLI run failed");
    auto first = snapshot_dir(out_dir);
    require(invoke("stdout2.txt") == 0, "second CLI run failed");
    auto second = snapshot_dir(out_dir);

    require(first.size() == second.size(), "run outputs differ in file count");
    for (const auto& [name, bytes] : first) {
        require(second.count(name) == 1, "file " + name + " missing from the second run");
        require(bytes == second.at(name), "file " + name + " is not byte-identical");
    }
    require(read_file(root / "stdout1.txt") == read_file(root / "stdout2.txt"),
            "stdout differs between runs");

    // comparison.csv: header plus exactly 3 strategy rows, 4 columns each
    std::istringstream comparison(first.at("comparison.csv"));
    std::string line;
    std::getline(comparison, line);
    require(line == "portfolio,annualized_return,annualized_volatility,sharpe",
            "unexpected comparison.csv header");
    int rows = 0;
    while (std::getline(comparison, line)) {
        if (line.empty()) continue;
        ++rows;
        require(std::count(line.begin(), line.end(), ',') == 3,
                "comparison row does not have 4 columns: " + line);
    }
    require(rows == 3, "comparison.csv has " + std::to_string(rows) + " rows, expected 3");
#endif
}

}  // namespace

int main() {
    criterion(1, "reference ranking rows satisfy sharpe = return / volatility", 1.0,
              criterion_metric_consistency);
    criterion(2, "Jacobi eigensolver suite on 100 random 30x30 correlations", 5.0,
              criterion_eigensolver_suite);
    criterion(3, "score variance equals the eigenvalue on 20 panels (M=500, N=10)", 5.0,
              criterion_variance_identity);
    criterion(4, "cumulative explained variance properties", 0.0, criterion_cev_properties);
    criterion(5, "annualization and Sharpe match brute-force oracles", 0.0,
              criterion_sharpe_oracle);
    criterion(6, "ensemble coefficients and weights conserve full investment", 0.0,
              criterion_ensemble_conservation);
    criterion(7, "planted one-factor panel end to end", 10.0, criterion_planted_factor);
    criterion(8, "chronological split protocol on a 1000-row panel", 0.0,
              criterion_split_protocol);
    criterion(9, "CLI backtest runs are byte-deterministic", 0.0, criterion_cli_determinism);

    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all 9 criteria passed\n");
    return 0;
}
