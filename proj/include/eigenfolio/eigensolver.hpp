#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <vector>

#include "eigenfolio/stats.hpp"

namespace eigenfolio {

/// Full eigendecomposition of a correlation matrix. Eigenvalues are sorted
/// descending and non-negative (values in [-1e-8, 0) are clamped to 0 on
/// construction; anything below that tolerance is rejected as a broken
/// input). Eigenvector columns are orthonormal, aligned with the
/// eigenvalues, and sign-fixed: each column sums to >= 0, and when the sum
/// is 0 within 1e-12 the first entry of largest magnitude is >= 0.
class EigenDecomposition {
public:
    EigenDecomposition(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors,
                       std::vector<std::string> tickers);

    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }
    const std::vector<std::string>& tickers() const { return tickers_; }
    Eigen::Index size() const { return eigenvalues_.size(); }

private:
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd eigenvectors_;
    std::vector<std::string> tickers_;
};

/// Per-period scores of the standardized returns on the leading principal
/// components: an M x k matrix, column i holding the projections onto
/// component i.
struct FactorScores {
    Eigen::MatrixXd scores;

    Eigen::Index rows() const { return scores.rows(); }
    Eigen::Index components() const { return scores.cols(); }
};

/// Eigendecomposition via the cyclic Jacobi rotation method, iterating
/// sweeps until the off-diagonal Frobenius norm falls below 1e-12 (at most
/// 100 sweeps; failure to converge raises std::runtime_error).
EigenDecomposition eigendecompose(const CorrelationMatrix& corr);

/// Fraction of total variance carried by the k leading components,
/// sum(lambda_1..k) / sum(lambda_1..N). Nondecreasing in k; exactly 1 for
/// k = N. k must lie in [1, N].
double cumulative_explained_variance(const EigenDecomposition& decomposition, int k);

/// Projects standardized returns onto the k leading components. The panel
/// and the decomposition must describe the same tickers.
FactorScores project(const StandardizedReturns& standardized,
                     const EigenDecomposition& decomposition, int k);

/// Maps factor scores back to the original (standardized) coordinates.
/// With k = N this inverts project() up to floating-point error.
Eigen::MatrixXd reconstruct(const FactorScores& scores, const EigenDecomposition& decomposition);

/// CSV with one row per component: eigenvalue, explained variance share,
/// and cumulative share, 6 decimal places.
void write_eigenvalue_csv(const EigenDecomposition& decomposition, std::ostream& os);

}  // namespace eigenfolio
