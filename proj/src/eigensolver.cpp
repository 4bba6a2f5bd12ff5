#include "eigenfolio/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace eigenfolio {
namespace {

constexpr double kOffDiagonalTol = 1e-12;   // convergence target for the Frobenius off-norm
constexpr int kMaxSweeps = 100;
constexpr double kNegativeEigenvalueTol = -1e-8;  // clamp limit for rank-deficient inputs
constexpr double kSignTieTol = 1e-12;

double off_diagonal_norm(const Eigen::MatrixXd& a) {
    double sum = 0.0;
    for (Eigen::Index p = 0; p < a.rows(); ++p)
        for (Eigen::Index q = 0; q < a.cols(); ++q)
            if (p != q) sum += a(p, q) * a(p, q);
    return std::sqrt(sum);
}

// One cyclic sweep of Jacobi rotations over the strict upper triangle.
// Each rotation zeroes a(p, q) exactly (forced after the update) while
// accumulating the rotations into v, so that original = v * a * v^T holds
// throughout.
void jacobi_sweep(Eigen::MatrixXd& a, Eigen::MatrixXd& v) {
    const Eigen::Index n = a.rows();
    for (Eigen::Index p = 0; p < n - 1; ++p) {
        for (Eigen::Index q = p + 1; q < n; ++q) {
            const double apq = a(p, q);
            if (std::abs(apq) <= 1e-300) continue;  // nothing to rotate away

            // Rotation angle from Golub & Van Loan: pick t = tan(theta)
            // with the smaller magnitude root for stability.
            const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
            const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                             (std::abs(tau) + std::sqrt(1.0 + tau * tau));
            const double c = 1.0 / std::sqrt(1.0 + t * t);
            const double s = t * c;

            // A <- J^T A J applied to rows/columns p and q only.
            for (Eigen::Index k = 0; k < n; ++k) {
                const double akp = a(k, p);
                const double akq = a(k, q);
                a(k, p) = c * akp - s * akq;
                a(k, q) = s * akp + c * akq;
            }
            for (Eigen::Index k = 0; k < n; ++k) {
                const double apk = a(p, k);
                const double aqk = a(q, k);
                a(p, k) = c * apk - s * aqk;
                a(q, k) = s * apk + c * aqk;
            }
            a(p, q) = 0.0;  // zero by construction; do not leave rounding dust
            a(q, p) = 0.0;

            for (Eigen::Index k = 0; k < n; ++k) {
                const double vkp = v(k, p);
                const double vkq = v(k, q);
                v(k, p) = c * vkp - s * vkq;
                v(k, q) = s * vkp + c * vkq;
            }
        }
    }
}

void apply_sign_convention(Eigen::MatrixXd& vectors) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        double sum = vectors.col(c).sum();
        bool flip = false;
        if (std::abs(sum) <= kSignTieTol) {
            // Sum carries no signal; fall back to the first entry of
            // largest magnitude.
            Eigen::Index imax = 0;
            double best = -1.0;
            for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
                double mag = std::abs(vectors(r, c));
                if (mag > best) {
                    best = mag;
                    imax = r;
                }
            }
            flip = vectors(imax, c) < 0.0;
        } else {
            flip = sum < 0.0;
        }
        if (flip) vectors.col(c) = -vectors.col(c);
    }
}

}  // namespace

EigenDecomposition::EigenDecomposition(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors,
                                       std::vector<std::string> tickers)
    : eigenvalues_(std::move(eigenvalues)),
      eigenvectors_(std::move(eigenvectors)),
      tickers_(std::move(tickers)) {
    const Eigen::Index n = eigenvalues_.size();
    if (n == 0) throw std::invalid_argument("empty eigendecomposition");
    if (eigenvectors_.rows() != n || eigenvectors_.cols() != n)
        throw std::invalid_argument("eigenvector matrix must be N x N with N eigenvalues");
    if (static_cast<Eigen::Index>(tickers_.size()) != n)
        throw std::invalid_argument("eigendecomposition ticker count mismatch");

    for (Eigen::Index i = 0; i < n; ++i) {
        if (!std::isfinite(eigenvalues_(i)))
            throw std::invalid_argument("non-finite eigenvalue");
        if (eigenvalues_(i) < kNegativeEigenvalueTol)
            throw std::runtime_error(
                "eigenvalue " + std::to_string(eigenvalues_(i)) +
                " below tolerance -1e-8; matrix is not positive semidefinite");
        if (eigenvalues_(i) < 0.0) eigenvalues_(i) = 0.0;  // rank-deficiency noise
    }
    for (Eigen::Index i = 1; i < n; ++i)
        if (eigenvalues_(i) > eigenvalues_(i - 1))
            throw std::invalid_argument("eigenvalues not sorted in descending order");

    apply_sign_convention(eigenvectors_);

    Eigen::MatrixXd gram = eigenvectors_.transpose() * eigenvectors_;
    gram.diagonal().array() -= 1.0;
    if (gram.cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("eigenvector columns are not orthonormal");

    double trace = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) trace += eigenvalues_(i);
    if (std::abs(trace - static_cast<double>(n)) > 1e-8)
        throw std::invalid_argument("eigenvalue sum " + std::to_string(trace) +
                                    " does not match correlation trace " + std::to_string(n));
}

EigenDecomposition eigendecompose(const CorrelationMatrix& corr) {
    const Eigen::Index n = corr.size();
    Eigen::MatrixXd a = corr.matrix();
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

    bool converged = off_diagonal_norm(a) < kOffDiagonalTol;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        jacobi_sweep(a, v);
        converged = off_diagonal_norm(a) < kOffDiagonalTol;
    }
    if (!converged)
        throw std::runtime_error("Jacobi eigensolver did not converge within " +
                                 std::to_string(kMaxSweeps) + " sweeps (off-diagonal norm " +
                                 std::to_string(off_diagonal_norm(a)) + ")");

    // Stable descending sort keeps the Jacobi output order for ties.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index lhs, Eigen::Index rhs) { return a(lhs, lhs) > a(rhs, rhs); });

    Eigen::VectorXd values(n);
    Eigen::MatrixXd vectors(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        values(i) = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
        vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
    }
    return EigenDecomposition(std::move(values), std::move(vectors), corr.tickers());
}

double cumulative_explained_variance(const EigenDecomposition& decomposition, int k) {
    const Eigen::Index n = decomposition.size();
    if (k < 1 || k > n)
        throw std::invalid_argument("component count k must lie in [1, " + std::to_string(n) +
                                    "], got " + std::to_string(k));
    if (k == n) return 1.0;
    // Sequential prefix sums keep the result monotone in k.
    double partial = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) partial += decomposition.eigenvalues()(i);
    double total = partial;
    for (Eigen::Index i = k; i < n; ++i) total += decomposition.eigenvalues()(i);
    return partial / total;
}

FactorScores project(const StandardizedReturns& standardized,
                     const EigenDecomposition& decomposition, int k) {
    if (standardized.tickers() != decomposition.tickers())
        throw std::invalid_argument("ticker mismatch between panel and decomposition");
    if (k < 1 || k > decomposition.size())
        throw std::invalid_argument("component count k must lie in [1, " +
                                    std::to_string(decomposition.size()) + "], got " +
                                    std::to_string(k));
    return FactorScores{standardized.matrix() * decomposition.eigenvectors().leftCols(k)};
}

Eigen::MatrixXd reconstruct(const FactorScores& scores, const EigenDecomposition& decomposition) {
    const Eigen::Index k = scores.components();
    if (k > decomposition.size())
        throw std::invalid_argument("scores carry more components than the decomposition");
    if (k == 0) return Eigen::MatrixXd::Zero(scores.rows(), decomposition.size());
    return scores.scores * decomposition.eigenvectors().leftCols(k).transpose();
}

void write_eigenvalue_csv(const EigenDecomposition& decomposition, std::ostream& os) {
    os << "component,eigenvalue,explained_variance,cumulative_explained_variance\n";
    const Eigen::Index n = decomposition.size();
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) total += decomposition.eigenvalues()(i);
    char buf[96];
    for (Eigen::Index i = 0; i < n; ++i) {
        double lambda = decomposition.eigenvalues()(i);
        double cumulative = cumulative_explained_variance(decomposition, static_cast<int>(i) + 1);
        std::snprintf(buf, sizeof(buf), "%lld,%.6f,%.6f,%.6f", static_cast<long long>(i), lambda,
                      lambda / total, cumulative);
        os << buf << '\n';
    }
}

}  // namespace eigenfolio
