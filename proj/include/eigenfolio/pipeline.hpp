#pragma once

#include <iosfwd>
#include <string>

#include "eigenfolio/backtest.hpp"

namespace eigenfolio {

/// Which strategies the backtest command evaluates.
enum class Strategy { BestSingle, Ensemble, EqualWeight, All };

/// Resolved run parameters shared by the analyze / rank / backtest
/// commands. n_max = 0 means "one ensemble candidate per component".
struct RunConfig {
    std::string input_path;
    double train_fraction = 0.8;
    int periods_per_year = 252;
    Normalization normalization = Normalization::SignedSumOne;
    MissingPolicy missing_policy = MissingPolicy::Strict;
    int n_max = 0;
    double risk_free_daily = 0.0;
    std::string output_dir = "out";
};

/// Throws std::invalid_argument for out-of-range parameters.
void validate(const RunConfig& config);

std::string to_string(Normalization mode);
std::string to_string(MissingPolicy policy);
std::string to_string(Strategy strategy);

/// Everything the three commands share: loaded prices, the chronological
/// train/test split, and the train-window decomposition.
struct PipelineResult {
    PriceTable prices;
    ReturnTable returns;
    ReturnTable train;
    ReturnTable test;
    StandardizedReturns standardized_train;
    CorrelationMatrix correlation;
    EigenDecomposition decomposition;
};

PipelineResult run_core_pipeline(const RunConfig& config);

/// analyze: correlation.csv, eigen.csv, weights_pc1..5.csv (or fewer for
/// small universes), run_config.txt.
void run_analyze(const RunConfig& config);

/// rank: ranking.csv, ranking.json, run_config.txt.
void run_rank(const RunConfig& config);

/// backtest: report_*.json, cumulative.csv, comparison.csv (when more than
/// one strategy ran), ensemble_curve.csv (when the ensemble ran),
/// run_config.txt. Prints the comparison table (or the single strategy's
/// metrics) to `out`; pass std::cout from the CLI.
void run_backtest_command(const RunConfig& config, Strategy strategy, std::ostream& out);

}  // namespace eigenfolio
