#pragma once

#include "edgesample/graph.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

namespace edgesample {

/// Eigenpairs of a symmetric matrix, eigenvalues ascending, eigenvectors orthonormal columns.
struct Spectrum {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;

    [[nodiscard]] Eigen::Index size() const noexcept { return eigenvalues.size(); }
};

inline Spectrum eig_sym(const Eigen::MatrixXd& m)
{
    if (m.rows() != m.cols())
        throw Error(ErrorCode::NotSymmetric, "matrix is not square");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw Error(ErrorCode::NotSymmetric, "asymmetry exceeds 1e-12 relative");
    if (m.rows() == 0)
        return {};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    // SelfAdjointEigenSolver already sorts ascending.
    return {solver.eigenvalues(), solver.eigenvectors()};
}

inline Spectrum eig_sym(const SparseMatrix& m) { return eig_sym(Eigen::MatrixXd(m)); }

/// Edge-domain graph Fourier transform: w_hat = V^T w.
inline Eigen::VectorXd edge_gft(const Eigen::MatrixXd& basis, const Eigen::VectorXd& w)
{
    if (basis.rows() != w.size())
        throw Error(ErrorCode::DimensionMismatch, "basis has " + std::to_string(basis.rows()) +
                                                      " rows, signal has " + std::to_string(w.size()));
    return basis.transpose() * w;
}

inline Eigen::VectorXd inverse_edge_gft(const Eigen::MatrixXd& basis, const Eigen::VectorXd& w_hat)
{
    if (basis.cols() != w_hat.size())
        throw Error(ErrorCode::DimensionMismatch, "coefficient count differs from basis size");
    return basis * w_hat;
}

/// Energy outside the first `bandwidth` coefficients: sum_{a >= K} w_hat_a^2.
inline double bandlimit_energy(const Eigen::VectorXd& w_hat, Eigen::Index bandwidth)
{
    if (bandwidth <= 0 || bandwidth > w_hat.size())
        throw Error(ErrorCode::BadBandwidth, "K=" + std::to_string(bandwidth) + " with " +
                                                 std::to_string(w_hat.size()) + " coefficients");
    return w_hat.tail(w_hat.size() - bandwidth).squaredNorm();
}

struct LambdaMaxOptions {
    int max_iterations = 2000;
    double tolerance = 1e-9;
    double safety_factor = 1.01;
    double floor = 1e-8;
};

/**
 * Upper bound on the largest eigenvalue of a symmetric PSD operator.
 *
 * Power iteration from a fixed pseudo-random start; the converged Rayleigh
 * quotient is scaled by the safety factor and capped by the Gershgorin bound.
 * Without convergence the trace (or Gershgorin, whichever is smaller) is returned.
 */
template <typename Matrix>
double lambda_max_bound(const Matrix& m, const LambdaMaxOptions& opt = {})
{
    const Eigen::Index n = m.rows();
    if (n == 0)
        return opt.floor;
    double trace = 0.0;
    Eigen::VectorXd row_abs = Eigen::VectorXd::Zero(n);
    if constexpr (std::is_base_of_v<Eigen::SparseMatrixBase<Matrix>, Matrix>) {
        for (Eigen::Index k = 0; k < m.outerSize(); ++k)
            for (typename Matrix::InnerIterator it(m, k); it; ++it) {
                row_abs[it.row()] += std::abs(it.value());
                if (it.row() == it.col())
                    trace += it.value();
            }
    } else {
        row_abs = m.cwiseAbs().rowwise().sum();
        trace = m.trace();
    }
    const double gershgorin = row_abs.maxCoeff();
    const double fallback = std::max(opt.floor, std::min(trace, gershgorin));
    if (gershgorin <= opt.floor)
        return opt.floor;

    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> unit(0.5, 1.5);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v[i] = (i % 2 == 0 ? 1.0 : -1.0) * unit(rng);
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < opt.max_iterations; ++it) {
        Eigen::VectorXd y = m * v;
        const double next = v.dot(y);
        const double norm = y.norm();
        if (norm == 0.0)
            return opt.floor;
        v = y / norm;
        if (it > 0 && std::abs(next - lambda) <= opt.tolerance * std::abs(next)) {
            lambda = next;
            return std::max(opt.floor, std::min(opt.safety_factor * lambda, gershgorin));
        }
        lambda = next;
    }
    return fallback;
}

} // namespace edgesample
