#include "eigenfolio/stats.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace eigenfolio {

namespace {
constexpr double kZeroVarianceTol = 1e-15;
constexpr double kStandardizationTol = 1e-10;
constexpr double kCorrelationEntryTol = 1e-12;
}  // namespace

StandardizedReturns::StandardizedReturns(Eigen::MatrixXd matrix, Eigen::VectorXd means,
                                         Eigen::VectorXd stds, std::vector<std::string> tickers)
    : matrix_(std::move(matrix)),
      means_(std::move(means)),
      stds_(std::move(stds)),
      tickers_(std::move(tickers)) {
    const Eigen::Index m = matrix_.rows();
    const Eigen::Index n = matrix_.cols();
    if (n != means_.size() || n != stds_.size() ||
        n != static_cast<Eigen::Index>(tickers_.size()))
        throw std::invalid_argument("standardized panel has inconsistent column metadata");
    if (m < 2) throw std::invalid_argument("standardized panel needs at least 2 rows");
    for (Eigen::Index c = 0; c < n; ++c) {
        if (!(stds_(c) > 0.0))
            throw std::invalid_argument("non-positive stored standard deviation for '" +
                                        tickers_[static_cast<std::size_t>(c)] + "'");
        double mean = matrix_.col(c).mean();
        if (std::abs(mean) > kStandardizationTol)
            throw std::invalid_argument("column '" + tickers_[static_cast<std::size_t>(c)] +
                                        "' is not centered");
        double var = (matrix_.col(c).array() - mean).square().sum() /
                     static_cast<double>(m - 1);
        if (std::abs(std::sqrt(var) - 1.0) > kStandardizationTol)
            throw std::invalid_argument("column '" + tickers_[static_cast<std::size_t>(c)] +
                                        "' does not have unit standard deviation");
    }
}

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXd matrix, std::vector<std::string> tickers)
    : matrix_(std::move(matrix)), tickers_(std::move(tickers)) {
    const Eigen::Index n = matrix_.rows();
    if (matrix_.cols() != n) throw std::invalid_argument("correlation matrix must be square");
    if (n != static_cast<Eigen::Index>(tickers_.size()))
        throw std::invalid_argument("correlation matrix size does not match ticker count");
    if (n == 0) throw std::invalid_argument("correlation matrix is empty");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (matrix_(i, i) != 1.0)
            throw std::invalid_argument("correlation diagonal must be exactly 1");
        for (Eigen::Index j = 0; j < i; ++j) {
            if (matrix_(i, j) != matrix_(j, i))
                throw std::invalid_argument("correlation matrix must be symmetric");
            double v = matrix_(i, j);
            if (!std::isfinite(v) || std::abs(v) > 1.0 + kCorrelationEntryTol)
                throw std::invalid_argument("correlation entry out of [-1, 1] for '" +
                                            tickers_[static_cast<std::size_t>(i)] + "'/'" +
                                            tickers_[static_cast<std::size_t>(j)] + "'");
        }
    }
}

StandardizedReturns standardize(const ReturnTable& returns) {
    const Eigen::Index m = returns.rows();
    const Eigen::Index n = returns.cols();
    if (m < 3) throw std::invalid_argument("standardize requires at least 3 return rows");

    Eigen::VectorXd means = returns.returns().colwise().mean();
    Eigen::MatrixXd centered = returns.returns().rowwise() - means.transpose();
    Eigen::VectorXd stds(n);
    for (Eigen::Index c = 0; c < n; ++c) {
        double var = centered.col(c).squaredNorm() / static_cast<double>(m - 1);
        double sd = std::sqrt(var);
        if (sd <= kZeroVarianceTol)
            throw std::runtime_error("zero variance in column '" +
                                     returns.tickers()[static_cast<std::size_t>(c)] +
                                     "'; cannot standardize");
        stds(c) = sd;
    }
    Eigen::MatrixXd scaled = centered.array().rowwise() / stds.transpose().array();
    return StandardizedReturns(std::move(scaled), std::move(means), std::move(stds),
                               returns.tickers());
}

CorrelationMatrix correlation_matrix(const StandardizedReturns& standardized) {
    const Eigen::Index m = standardized.rows();
    const auto& x = standardized.matrix();
    Eigen::MatrixXd rho = (x.transpose() * x) / static_cast<double>(m - 1);
    rho = ((rho + rho.transpose()) / 2.0).eval();  // kill asymmetry from rounding
    rho.diagonal().setOnes();
    return CorrelationMatrix(std::move(rho), standardized.tickers());
}

void write_correlation_csv(const CorrelationMatrix& corr, std::ostream& os) {
    os << "ticker";
    for (const auto& ticker : corr.tickers()) os << ',' << ticker;
    os << '\n';
    char buf[32];
    for (Eigen::Index i = 0; i < corr.size(); ++i) {
        os << corr.tickers()[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < corr.size(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.6f", corr.matrix()(i, j));
            os << ',' << buf;
        }
        os << '\n';
    }
}

}  // namespace eigenfolio
