#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <vector>

#include "eigenfolio/market_data.hpp"

namespace eigenfolio {

/// Column-standardized return panel: each column has sample mean 0 and
/// sample standard deviation 1 (divisor M - 1). Keeps the original per
/// column means and standard deviations so the transform is invertible.
class StandardizedReturns {
public:
    StandardizedReturns(Eigen::MatrixXd matrix, Eigen::VectorXd means, Eigen::VectorXd stds,
                        std::vector<std::string> tickers);

    const Eigen::MatrixXd& matrix() const { return matrix_; }
    const Eigen::VectorXd& means() const { return means_; }
    const Eigen::VectorXd& stds() const { return stds_; }
    const std::vector<std::string>& tickers() const { return tickers_; }
    Eigen::Index rows() const { return matrix_.rows(); }
    Eigen::Index cols() const { return matrix_.cols(); }

private:
    Eigen::MatrixXd matrix_;
    Eigen::VectorXd means_;
    Eigen::VectorXd stds_;
    std::vector<std::string> tickers_;
};

/// N x N Pearson correlation matrix: symmetric, unit diagonal, entries in
/// [-1, 1]. Positive semidefiniteness is a property of exact arithmetic,
/// not an enforced invariant; the eigensolver deals with tiny negative
/// eigenvalues downstream.
class CorrelationMatrix {
public:
    CorrelationMatrix(Eigen::MatrixXd matrix, std::vector<std::string> tickers);

    const Eigen::MatrixXd& matrix() const { return matrix_; }
    const std::vector<std::string>& tickers() const { return tickers_; }
    Eigen::Index size() const { return matrix_.rows(); }

private:
    Eigen::MatrixXd matrix_;
    std::vector<std::string> tickers_;
};

/// Centers and scales each column to zero mean and unit sample standard
/// deviation (divisor M - 1). Requires at least 3 rows. Throws
/// std::runtime_error naming the ticker if a column has (near-)zero
/// variance, since such a column cannot be standardized.
StandardizedReturns standardize(const ReturnTable& returns);

/// rho = X^T X / (M - 1) for standardized X, symmetrized and with the
/// diagonal forced to exactly 1 to absorb floating-point drift.
CorrelationMatrix correlation_matrix(const StandardizedReturns& standardized);

/// CSV with a ticker header row and a leading ticker column, entries with
/// 6 decimal places.
void write_correlation_csv(const CorrelationMatrix& corr, std::ostream& os);

}  // namespace eigenfolio
