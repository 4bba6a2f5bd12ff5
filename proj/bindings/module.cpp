// Python bindings for the eigenfolio core library.

#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "eigenfolio/pipeline.hpp"

namespace py = pybind11;
using namespace eigenfolio;

PYBIND11_MODULE(_eigenfolio, m) {
    m.doc() = "Eigen-portfolio construction and backtesting";
    m.attr("__version__") = "0.1.0";

    py::class_<Date>(m, "Date")
        .def(py::init<int, int, int>(), py::arg("year"), py::arg("month"), py::arg("day"))
        .def(py::init([](const std::string& text) { return Date::parse(text); }), py::arg("text"))
        .def_readonly("year", &Date::year)
        .def_readonly("month", &Date::month)
        .def_readonly("day", &Date::day)
        .def("valid", &Date::valid)
        .def("__str__", &Date::to_string)
        .def("__repr__", [](const Date& d) { return "Date('" + d.to_string() + "')"; })
        .def("__hash__",
             [](const Date& d) { return (d.year * 10000 + d.month * 100 + d.day); })
        .def(py::self == py::self)
        .def(py::self != py::self)
        .def(py::self < py::self)
        .def(py::self <= py::self)
        .def(py::self > py::self)
        .def(py::self >= py::self);
    py::implicitly_convertible<py::str, Date>();
    m.def("advance", &advance, py::arg("date"), py::arg("days"));

    py::enum_<MissingPolicy>(m, "MissingPolicy")
        .value("STRICT", MissingPolicy::Strict)
        .value("FORWARD_FILL", MissingPolicy::ForwardFill);
    py::enum_<Normalization>(m, "Normalization")
        .value("SIGNED_SUM_ONE", Normalization::SignedSumOne)
        .value("ABS_SUM_ONE", Normalization::AbsSumOne);
    py::enum_<Strategy>(m, "Strategy")
        .value("BEST_SINGLE", Strategy::BestSingle)
        .value("ENSEMBLE", Strategy::Ensemble)
        .value("EQUAL_WEIGHT", Strategy::EqualWeight)
        .value("ALL", Strategy::All);
    py::enum_<Provenance::Kind>(m, "ProvenanceKind")
        .value("EIGEN_COMPONENT", Provenance::Kind::EigenComponent)
        .value("ENSEMBLE", Provenance::Kind::Ensemble)
        .value("EQUAL_WEIGHT", Provenance::Kind::EqualWeight);

    py::class_<Provenance>(m, "Provenance")
        .def_readonly("kind", &Provenance::kind)
        .def_readonly("components", &Provenance::components);

    py::class_<PriceTable>(m, "PriceTable")
        .def(py::init<std::vector<Date>, std::vector<std::string>, Eigen::MatrixXd>(),
             py::arg("dates"), py::arg("tickers"), py::arg("prices"))
        .def_property_readonly("dates", &PriceTable::dates)
        .def_property_readonly("tickers", &PriceTable::tickers)
        .def_property_readonly("prices", &PriceTable::prices)
        .def_property_readonly("rows", &PriceTable::rows)
        .def_property_readonly("cols", &PriceTable::cols);

    py::class_<ReturnTable>(m, "ReturnTable")
        .def(py::init<std::vector<Date>, std::vector<std::string>, Eigen::MatrixXd>(),
             py::arg("dates"), py::arg("tickers"), py::arg("returns"))
        .def_property_readonly("dates", &ReturnTable::dates)
        .def_property_readonly("tickers", &ReturnTable::tickers)
        .def_property_readonly("returns", &ReturnTable::returns)
        .def_property_readonly("rows", &ReturnTable::rows)
        .def_property_readonly("cols", &ReturnTable::cols);

    m.def("load_prices", &load_prices_file, py::arg("path"),
          py::arg("policy") = MissingPolicy::Strict, "Load a price CSV from a file path.");
    m.def(
        "load_prices_csv",
        [](const std::string& text, MissingPolicy policy) {
            std::istringstream in(text);
            return load_prices(in, policy);
        },
        py::arg("text"), py::arg("policy") = MissingPolicy::Strict,
        "Parse a price CSV given as a string.");
    m.def(
        "prices_to_csv",
        [](const PriceTable& table) {
            std::ostringstream os;
            write_prices_csv(table, os);
            return os.str();
        },
        py::arg("table"), "Render a price table as CSV text (full precision).");
    m.def("compute_returns", &compute_returns, py::arg("prices"));
    m.def("chronological_split", &chronological_split, py::arg("returns"),
          py::arg("train_fraction"));

    py::class_<StandardizedReturns>(m, "StandardizedReturns")
        .def_property_readonly("matrix", &StandardizedReturns::matrix)
        .def_property_readonly("means", &StandardizedReturns::means)
        .def_property_readonly("stds", &StandardizedReturns::stds)
        .def_property_readonly("tickers", &StandardizedReturns::tickers);
    m.def("standardize", &standardize, py::arg("returns"));

    py::class_<CorrelationMatrix>(m, "CorrelationMatrix")
        .def(py::init<Eigen::MatrixXd, std::vector<std::string>>(), py::arg("matrix"),
             py::arg("tickers"))
        .def_property_readonly("matrix", &CorrelationMatrix::matrix)
        .def_property_readonly("tickers", &CorrelationMatrix::tickers)
        .def_property_readonly("size", &CorrelationMatrix::size);
    m.def("correlation_matrix", &correlation_matrix, py::arg("standardized"));

    py::class_<EigenDecomposition>(m, "EigenDecomposition")
        .def(py::init<Eigen::VectorXd, Eigen::MatrixXd, std::vector<std::string>>(),
             py::arg("eigenvalues"), py::arg("eigenvectors"), py::arg("tickers"))
        .def_property_readonly("eigenvalues", &EigenDecomposition::eigenvalues)
        .def_property_readonly("eigenvectors", &EigenDecomposition::eigenvectors)
        .def_property_readonly("tickers", &EigenDecomposition::tickers)
        .def_property_readonly("size", &EigenDecomposition::size);
    m.def("eigendecompose", &eigendecompose, py::arg("correlation"));
    m.def("cumulative_explained_variance", &cumulative_explained_variance,
          py::arg("decomposition"), py::arg("k"));

    py::class_<FactorScores>(m, "FactorScores")
        .def(py::init([](Eigen::MatrixXd scores) { return FactorScores{std::move(scores)}; }),
             py::arg("scores"))
        .def_readonly("scores", &FactorScores::scores);
    m.def("project", &project, py::arg("standardized"), py::arg("decomposition"), py::arg("k"));
    m.def("reconstruct", &reconstruct, py::arg("scores"), py::arg("decomposition"));
    m.def("normalized_component_variance", &normalized_component_variance,
          py::arg("decomposition"), py::arg("component"));

    py::class_<PortfolioWeights>(m, "PortfolioWeights")
        .def_property_readonly("weights", &PortfolioWeights::weights)
        .def_property_readonly("tickers", &PortfolioWeights::tickers)
        .def_property_readonly("normalization", &PortfolioWeights::normalization)
        .def_property_readonly("provenance", &PortfolioWeights::provenance)
        .def_property_readonly("size", &PortfolioWeights::size);

    py::class_<AnnualizedReturn>(m, "AnnualizedReturn")
        .def_readonly("value", &AnnualizedReturn::value)
        .def_readonly("total_loss", &AnnualizedReturn::total_loss);

    py::class_<PerformanceMetrics>(m, "PerformanceMetrics")
        .def_readonly("annualized_return", &PerformanceMetrics::annualized_return)
        .def_readonly("annualized_volatility", &PerformanceMetrics::annualized_volatility)
        .def_readonly("sharpe", &PerformanceMetrics::sharpe)
        .def_readonly("total_loss", &PerformanceMetrics::total_loss);

    m.def("normalize_eigenvector", &normalize_eigenvector, py::arg("loadings"), py::arg("mode"),
          py::arg("component"), py::arg("tickers"));
    m.def("portfolio_return_series", &portfolio_return_series, py::arg("weights"),
          py::arg("returns"));
    m.def("annualized_return", &annualized_return, py::arg("series"),
          py::arg("periods_per_year") = kDefaultPeriodsPerYear);
    m.def("annualized_volatility", &annualized_volatility, py::arg("series"),
          py::arg("periods_per_year") = kDefaultPeriodsPerYear);
    m.def("sharpe_ratio", &sharpe_ratio, py::arg("series"),
          py::arg("periods_per_year") = kDefaultPeriodsPerYear,
          py::arg("risk_free_daily") = 0.0);

    py::class_<RankedEntry>(m, "RankedEntry")
        .def_readonly("component", &RankedEntry::component)
        .def_readonly("weights", &RankedEntry::weights)
        .def_readonly("metrics", &RankedEntry::metrics);
    py::class_<SkippedComponent>(m, "SkippedComponent")
        .def_readonly("component", &SkippedComponent::component)
        .def_readonly("reason", &SkippedComponent::reason);
    py::class_<RankedComponents>(m, "RankedComponents")
        .def_readonly("entries", &RankedComponents::entries)
        .def_readonly("skipped", &RankedComponents::skipped);
    m.def("rank_components", &rank_components, py::arg("decomposition"), py::arg("train"),
          py::arg("mode"), py::arg("periods_per_year") = kDefaultPeriodsPerYear,
          py::arg("risk_free_daily") = 0.0);

    py::class_<EnsembleSpec>(m, "EnsembleSpec")
        .def_readonly("n", &EnsembleSpec::n)
        .def_readonly("coefficients", &EnsembleSpec::coefficients)
        .def_readonly("member_indices", &EnsembleSpec::member_indices)
        .def_readonly("combined", &EnsembleSpec::combined);
    m.def("ensemble_weights", &ensemble_weights, py::arg("ranked"), py::arg("n"));

    py::class_<SweepPoint>(m, "SweepPoint")
        .def_readonly("n", &SweepPoint::n)
        .def_readonly("sharpe", &SweepPoint::sharpe);
    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("best_n", &SweepResult::best_n)
        .def_readonly("curve", &SweepResult::curve);
    m.def("sweep_ensemble_size", &sweep_ensemble_size, py::arg("ranked"), py::arg("train"),
          py::arg("n_max"), py::arg("periods_per_year") = kDefaultPeriodsPerYear,
          py::arg("risk_free_daily") = 0.0);

    py::class_<Position>(m, "Position")
        .def_readonly("ticker", &Position::ticker)
        .def_readonly("weight", &Position::weight);
    py::class_<TopPositions>(m, "TopPositions")
        .def_readonly("longs", &TopPositions::longs)
        .def_readonly("shorts", &TopPositions::shorts);
    m.def("top_positions", &top_positions, py::arg("weights"), py::arg("k"));

    m.def("equal_weight_benchmark", &equal_weight_benchmark, py::arg("tickers"));

    py::class_<BacktestReport>(m, "BacktestReport")
        .def_readonly("label", &BacktestReport::label)
        .def_readonly("weights", &BacktestReport::weights)
        .def_readonly("metrics", &BacktestReport::metrics)
        .def_readonly("sharpe_defined", &BacktestReport::sharpe_defined)
        .def_readonly("dates", &BacktestReport::dates)
        .def_readonly("daily_returns", &BacktestReport::daily_returns)
        .def_readonly("cumulative", &BacktestReport::cumulative)
        .def_readonly("period_start", &BacktestReport::period_start)
        .def_readonly("period_end", &BacktestReport::period_end);
    m.def("run_backtest", &run_backtest, py::arg("weights"), py::arg("test"), py::arg("label"),
          py::arg("periods_per_year") = kDefaultPeriodsPerYear,
          py::arg("risk_free_daily") = 0.0);

    py::class_<ComparisonRow>(m, "ComparisonRow")
        .def_readonly("label", &ComparisonRow::label)
        .def_readonly("annualized_return", &ComparisonRow::annualized_return)
        .def_readonly("annualized_volatility", &ComparisonRow::annualized_volatility)
        .def_readonly("sharpe", &ComparisonRow::sharpe)
        .def_readonly("sharpe_defined", &ComparisonRow::sharpe_defined);
    py::class_<ComparisonTable>(m, "ComparisonTable")
        .def_readonly("rows", &ComparisonTable::rows)
        .def("to_text", &ComparisonTable::to_text);
    m.def("compare", &compare, py::arg("reports"));
    m.def("format_percent", &format_percent, py::arg("fraction"));
    m.def("format_ratio", &format_ratio, py::arg("value"));

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("input_path", &RunConfig::input_path)
        .def_readwrite("train_fraction", &RunConfig::train_fraction)
        .def_readwrite("periods_per_year", &RunConfig::periods_per_year)
        .def_readwrite("normalization", &RunConfig::normalization)
        .def_readwrite("missing_policy", &RunConfig::missing_policy)
        .def_readwrite("n_max", &RunConfig::n_max)
        .def_readwrite("risk_free_daily", &RunConfig::risk_free_daily)
        .def_readwrite("output_dir", &RunConfig::output_dir);

    py::class_<PipelineResult>(m, "PipelineResult")
        .def_readonly("prices", &PipelineResult::prices)
        .def_readonly("returns", &PipelineResult::returns)
        .def_readonly("train", &PipelineResult::train)
        .def_readonly("test", &PipelineResult::test)
        .def_readonly("standardized_train", &PipelineResult::standardized_train)
        .def_readonly("correlation", &PipelineResult::correlation)
        .def_readonly("decomposition", &PipelineResult::decomposition);
    m.def("run_core_pipeline", &run_core_pipeline, py::arg("config"));
    m.def("run_analyze", &run_analyze, py::arg("config"));
    m.def("run_rank", &run_rank, py::arg("config"));
    m.def(
        "run_backtest_command",
        [](const RunConfig& config, Strategy strategy) {
            std::ostringstream out;
            run_backtest_command(config, strategy, out);
            return out.str();
        },
        py::arg("config"), py::arg("strategy") = Strategy::All,
        "Run the backtest command; returns the comparison text that the CLI prints.");
}
