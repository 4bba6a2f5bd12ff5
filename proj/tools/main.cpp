// Command-line front end: analyze / rank / backtest over a price CSV.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "eigenfolio/pipeline.hpp"

namespace {

using eigenfolio::MissingPolicy;
using eigenfolio::Normalization;
using eigenfolio::RunConfig;
using eigenfolio::Strategy;

// Shared options live on the root app; subcommands fall unmatched flags
// through to it, so they can be given before or after the subcommand name.
void add_common_options(CLI::App& app, RunConfig& config) {
    app.add_option("--input", config.input_path, "Price CSV (header: date,TICKER,...)")
        ->required();
    app.add_option("--train-fraction", config.train_fraction,
                   "Fraction of return rows used for training (0, 1)")
        ->capture_default_str();
    app.add_option("--periods-per-year", config.periods_per_year,
                   "Periods per year used for annualization")
        ->capture_default_str();
    app.add_option("--normalization", config.normalization,
                   "Weight normalization: signed (sum to 1) or abs (gross exposure 1)")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Normalization>{{"signed", Normalization::SignedSumOne},
                                                 {"abs", Normalization::AbsSumOne}},
            CLI::ignore_case))
        ->default_str("signed");
    app.add_option("--missing", config.missing_policy,
                   "Missing-cell policy: strict (error) or ffill (forward fill)")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, MissingPolicy>{{"strict", MissingPolicy::Strict},
                                                 {"ffill", MissingPolicy::ForwardFill}},
            CLI::ignore_case))
        ->default_str("strict");
    app.add_option("--n-max", config.n_max,
                   "Largest ensemble size to sweep (default: one per component)");
    app.add_option("--risk-free-daily", config.risk_free_daily,
                   "Daily risk-free rate subtracted before computing metrics")
        ->capture_default_str();
    app.add_option("--out", config.output_dir, "Output directory (also via EIGENFOLIO_OUT)")
        ->envname("EIGENFOLIO_OUT")
        ->capture_default_str();
    app.set_config("--config", "", "Config file with key=value lines; flags take precedence");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Eigen-portfolio construction and backtesting from historical prices"};
    app.require_subcommand(1);
    app.fallthrough();  // inherited by the subcommands created below

    RunConfig config;
    Strategy strategy = Strategy::All;
    add_common_options(app, config);

    CLI::App* analyze = app.add_subcommand(
        "analyze", "Correlation matrix, eigenvalue spectrum and leading component weights");
    analyze->callback([&] { eigenfolio::run_analyze(config); });

    CLI::App* rank =
        app.add_subcommand("rank", "Rank eigen-portfolios by in-sample Sharpe ratio");
    rank->callback([&] { eigenfolio::run_rank(config); });

    CLI::App* backtest = app.add_subcommand(
        "backtest", "Evaluate strategies on the held-out window and compare them");
    backtest
        ->add_option("--strategy", strategy, "best-single, ensemble, equal-weight or all")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Strategy>{{"best-single", Strategy::BestSingle},
                                            {"ensemble", Strategy::Ensemble},
                                            {"equal-weight", Strategy::EqualWeight},
                                            {"all", Strategy::All}},
            CLI::ignore_case))
        ->default_str("all");
    backtest->callback([&] { eigenfolio::run_backtest_command(config, strategy, std::cout); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
