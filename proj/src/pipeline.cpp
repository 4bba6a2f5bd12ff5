#include "eigenfolio/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>

namespace eigenfolio {
namespace {

namespace fs = std::filesystem;

// %g keeps values like 0.8 and 252 short and is stable run to run.
std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", value);
    return buf;
}

void write_output_file(const fs::path& dir, const std::string& name,
                       const std::function<void(std::ostream&)>& writer) {
    fs::path path = dir / name;
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open output file '" + path.string() + "'");
    writer(os);
    os.flush();
    if (!os) throw std::runtime_error("failed writing output file '" + path.string() + "'");
}

fs::path prepare_output_dir(const RunConfig& config) {
    fs::path dir(config.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec && !fs::is_directory(dir))
        throw std::runtime_error("cannot create output directory '" + dir.string() +
                                 "': " + ec.message());
    return dir;
}

// Echo of the fully resolved configuration, flag-style keys, one per line.
// n-max is written as the effective value (universe size when unset).
void write_run_config(const RunConfig& config, int resolved_n_max,
                      std::optional<Strategy> strategy, std::ostream& os) {
    os << "input=" << config.input_path << '\n';
    os << "train-fraction=" << format_number(config.train_fraction) << '\n';
    os << "periods-per-year=" << config.periods_per_year << '\n';
    os << "normalization=" << to_string(config.normalization) << '\n';
    os << "missing=" << to_string(config.missing_policy) << '\n';
    os << "n-max=" << resolved_n_max << '\n';
    os << "risk-free-daily=" << format_number(config.risk_free_daily) << '\n';
    os << "out=" << config.output_dir << '\n';
    if (strategy) os << "strategy=" << to_string(*strategy) << '\n';
}

void write_weight_csv(const PortfolioWeights& weights, std::ostream& os) {
    os << "ticker,weight\n";
    char buf[32];
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.6f", weights.weights()(i));
        os << weights.tickers()[static_cast<std::size_t>(i)] << ',' << buf << '\n';
    }
}

void write_sweep_csv(const SweepResult& sweep, std::ostream& os) {
    os << "n,sharpe\n";
    char buf[32];
    for (const auto& point : sweep.curve) {
        std::snprintf(buf, sizeof(buf), "%.6f", point.sharpe);
        os << point.n << ',' << buf << '\n';
    }
}

}  // namespace

void validate(const RunConfig& config) {
    if (config.input_path.empty()) throw std::invalid_argument("input path is required");
    if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0))
        throw std::invalid_argument("train-fraction must lie in (0, 1)");
    if (config.periods_per_year < 1)
        throw std::invalid_argument("periods-per-year must be >= 1");
    if (config.n_max < 0) throw std::invalid_argument("n-max must be >= 1 (or omitted)");
    if (config.output_dir.empty()) throw std::invalid_argument("output directory is required");
}

std::string to_string(Normalization mode) {
    return mode == Normalization::SignedSumOne ? "signed" : "abs";
}

std::string to_string(MissingPolicy policy) {
    return policy == MissingPolicy::Strict ? "strict" : "ffill";
}

std::string to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::BestSingle: return "best-single";
        case Strategy::Ensemble: return "ensemble";
        case Strategy::EqualWeight: return "equal-weight";
        case Strategy::All: return "all";
    }
    throw std::invalid_argument("unknown strategy");
}

PipelineResult run_core_pipeline(const RunConfig& config) {
    validate(config);
    PriceTable prices = load_prices_file(config.input_path, config.missing_policy);
    ReturnTable returns = compute_returns(prices);
    auto [train, test] = chronological_split(returns, config.train_fraction);
    StandardizedReturns standardized = standardize(train);
    CorrelationMatrix correlation = correlation_matrix(standardized);
    EigenDecomposition decomposition = eigendecompose(correlation);
    return PipelineResult{std::move(prices),       std::move(returns),
                          std::move(train),        std::move(test),
                          std::move(standardized), std::move(correlation),
                          std::move(decomposition)};
}

void run_analyze(const RunConfig& config) {
    PipelineResult result = run_core_pipeline(config);
    fs::path dir = prepare_output_dir(config);

    write_output_file(dir, "correlation.csv",
                      [&](std::ostream& os) { write_correlation_csv(result.correlation, os); });
    write_output_file(dir, "eigen.csv",
                      [&](std::ostream& os) { write_eigenvalue_csv(result.decomposition, os); });

    const int n = static_cast<int>(result.decomposition.size());
    const int top = std::min(5, n);
    for (int k = 0; k < top; ++k) {
        PortfolioWeights weights =
            normalize_eigenvector(result.decomposition.eigenvectors().col(k),
                                  config.normalization, k, result.decomposition.tickers());
        write_output_file(dir, "weights_pc" + std::to_string(k + 1) + ".csv",
                          [&](std::ostream& os) { write_weight_csv(weights, os); });
    }

    const int resolved_n_max = config.n_max > 0 ? config.n_max : n;
    write_output_file(dir, "run_config.txt", [&](std::ostream& os) {
        write_run_config(config, resolved_n_max, std::nullopt, os);
    });
}

void run_rank(const RunConfig& config) {
    PipelineResult result = run_core_pipeline(config);
    fs::path dir = prepare_output_dir(config);

    RankedComponents ranked =
        rank_components(result.decomposition, result.train, config.normalization,
                        config.periods_per_year, config.risk_free_daily);
    write_output_file(dir, "ranking.csv",
                      [&](std::ostream& os) { write_ranking_csv(ranked, os); });
    write_output_file(dir, "ranking.json",
                      [&](std::ostream& os) { write_ranking_json(ranked, os); });

    const int resolved_n_max =
        config.n_max > 0 ? config.n_max : static_cast<int>(result.decomposition.size());
    write_output_file(dir, "run_config.txt", [&](std::ostream& os) {
        write_run_config(config, resolved_n_max, std::nullopt, os);
    });
}

void run_backtest_command(const RunConfig& config, Strategy strategy, std::ostream& out) {
    PipelineResult result = run_core_pipeline(config);
    fs::path dir = prepare_output_dir(config);

    const bool want_equal = strategy == Strategy::EqualWeight || strategy == Strategy::All;
    const bool want_single = strategy == Strategy::BestSingle || strategy == Strategy::All;
    const bool want_ensemble = strategy == Strategy::Ensemble || strategy == Strategy::All;

    std::optional<RankedComponents> ranked;
    if (want_single || want_ensemble)
        ranked = rank_components(result.decomposition, result.train, config.normalization,
                                 config.periods_per_year, config.risk_free_daily);

    std::vector<BacktestReport> reports;
    std::vector<std::string> report_files;

    if (want_equal) {
        reports.push_back(run_backtest(equal_weight_benchmark(result.test.tickers()), result.test,
                                       "Equal Weight", config.periods_per_year,
                                       config.risk_free_daily));
        report_files.push_back("report_equal_weight.json");
    }
    if (want_single) {
        reports.push_back(run_backtest(ranked->entries.front().weights, result.test,
                                       "Single Component", config.periods_per_year,
                                       config.risk_free_daily));
        report_files.push_back("report_best_single.json");
    }
    if (want_ensemble) {
        int positive = 0;
        for (const auto& entry : ranked->entries)
            if (entry.metrics.sharpe > 0.0) ++positive;
        if (positive == 0)
            throw std::runtime_error(
                "ensemble strategy needs at least one positive-Sharpe component in training");
        const int limit = config.n_max > 0 ? std::min(config.n_max, positive) : positive;
        SweepResult sweep = sweep_ensemble_size(*ranked, result.train, limit,
                                                config.periods_per_year, config.risk_free_daily);
        EnsembleSpec spec = ensemble_weights(*ranked, sweep.best_n);
        reports.push_back(run_backtest(spec.combined, result.test,
                                       "Best Ensemble (N=" + std::to_string(sweep.best_n) + ")",
                                       config.periods_per_year, config.risk_free_daily));
        report_files.push_back("report_ensemble.json");
        write_output_file(dir, "ensemble_curve.csv",
                          [&](std::ostream& os) { write_sweep_csv(sweep, os); });
    }

    for (std::size_t i = 0; i < reports.size(); ++i)
        write_output_file(dir, report_files[i],
                          [&](std::ostream& os) { write_report_json(reports[i], os); });
    write_output_file(dir, "cumulative.csv",
                      [&](std::ostream& os) { write_cumulative_csv(reports, os); });

    if (reports.size() >= 2) {
        ComparisonTable table = compare(reports);
        write_output_file(dir, "comparison.csv",
                          [&](std::ostream& os) { write_comparison_csv(table, os); });
        out << table.to_text();
    } else {
        const BacktestReport& report = reports.front();
        out << report.label << ": return " << format_percent(report.metrics.annualized_return)
            << ", volatility " << format_percent(report.metrics.annualized_volatility)
            << ", Sharpe "
            << (report.sharpe_defined ? format_ratio(report.metrics.sharpe) : std::string("n/a"))
            << '\n';
    }

    const int resolved_n_max =
        config.n_max > 0 ? config.n_max : static_cast<int>(result.decomposition.size());
    write_output_file(dir, "run_config.txt", [&](std::ostream& os) {
        write_run_config(config, resolved_n_max, strategy, os);
    });
}

}  // namespace eigenfolio
