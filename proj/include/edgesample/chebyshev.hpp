#pragma once

#include "edgesample/spectral.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace edgesample {

using SpectralFunction = std::function<double(double)>;

/**
 * Chebyshev approximation of a spectral kernel on [0, lambda_ub].
 *
 * g(lambda) ~= c_0 / 2 + sum_{k=1..p} c_k T_k((lambda - a) / a), a = lambda_ub / 2.
 * `sup_error` is max |g - approx| over a uniform grid of `grid_points` on [0, lambda_ub].
 */
struct FilterKernel {
    SpectralFunction g;
    double lambda_ub = 1.0;
    int degree = 0;
    std::vector<double> coefficients;
    double sup_error = 0.0;

    /// Scalar evaluation of the polynomial (Clenshaw).
    [[nodiscard]] double evaluate(double lambda) const
    {
        const double a = lambda_ub / 2.0;
        const double x = (lambda - a) / a;
        double b1 = 0.0;
        double b2 = 0.0;
        for (int k = degree; k >= 1; --k) {
            const double b0 = 2.0 * x * b1 - b2 + coefficients[static_cast<std::size_t>(k)];
            b2 = b1;
            b1 = b0;
        }
        return x * b1 - b2 + coefficients[0] / 2.0;
    }
};

struct ChebFitOptions {
    /// Quadrature nodes; 0 means degree + 1, which makes the fit the Chebyshev interpolant.
    int quadrature_points = 0;
    int grid_points = 1000;
};

inline FilterKernel cheb_fit(SpectralFunction g, double lambda_ub, int degree, const ChebFitOptions& opt = {})
{
    if (degree < 1)
        throw Error(ErrorCode::InvalidArgument, "Chebyshev degree must be >= 1");
    if (!(lambda_ub > 0.0))
        throw Error(ErrorCode::InvalidArgument, "lambda_ub must be positive");
    const int nodes = opt.quadrature_points > 0 ? opt.quadrature_points : degree + 1;
    const double a = lambda_ub / 2.0;

    std::vector<double> samples(static_cast<std::size_t>(nodes));
    for (int j = 0; j < nodes; ++j) {
        const double theta = std::numbers::pi * (j + 0.5) / nodes;
        samples[static_cast<std::size_t>(j)] = g(a * std::cos(theta) + a);
    }
    FilterKernel kernel{std::move(g), lambda_ub, degree, std::vector<double>(static_cast<std::size_t>(degree) + 1), 0.0};
    for (int k = 0; k <= degree; ++k) {
        double sum = 0.0;
        for (int j = 0; j < nodes; ++j) {
            const double theta = std::numbers::pi * (j + 0.5) / nodes;
            sum += samples[static_cast<std::size_t>(j)] * std::cos(k * theta);
        }
        kernel.coefficients[static_cast<std::size_t>(k)] = 2.0 * sum / nodes;
    }
    for (int i = 0; i < opt.grid_points; ++i) {
        const double lambda = lambda_ub * i / std::max(1, opt.grid_points - 1);
        kernel.sup_error = std::max(kernel.sup_error, std::abs(kernel.g(lambda) - kernel.evaluate(lambda)));
    }
    return kernel;
}

struct ApplyCpaOptions {
    bool check_range = true;
};

/**
 * Approximates g(M) X with the three-term Chebyshev recurrence (degree sparse
 * products). Throws RangeTooSmall when a power-iteration estimate of
 * lambda_max(M) exceeds the kernel's lambda_ub.
 */
template <typename Matrix>
Eigen::MatrixXd apply_cpa(const Matrix& m, const FilterKernel& kernel, const Eigen::MatrixXd& x,
                          const ApplyCpaOptions& opt = {})
{
    if (m.rows() != m.cols() || m.cols() != x.rows())
        throw Error(ErrorCode::DimensionMismatch, "operator and input sizes differ");
    if (opt.check_range) {
        LambdaMaxOptions est;
        est.safety_factor = 1.0;
        const double lambda_est = lambda_max_bound(m, est);
        if (lambda_est > kernel.lambda_ub * (1.0 + 1e-9))
            throw Error(ErrorCode::RangeTooSmall, "lambda_max estimate " + std::to_string(lambda_est) +
                                                      " exceeds kernel range " +
                                                      std::to_string(kernel.lambda_ub));
    }
    const double a = kernel.lambda_ub / 2.0;
    const auto& c = kernel.coefficients;
    Eigen::MatrixXd prev = x;
    Eigen::MatrixXd cur = (m * x - a * x) / a;
    Eigen::MatrixXd out = (c[0] / 2.0) * prev + c[1] * cur;
    for (int k = 2; k <= kernel.degree; ++k) {
        Eigen::MatrixXd next = (2.0 / a) * (m * cur - a * cur) - prev;
        out += c[static_cast<std::size_t>(k)] * next;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return out;
}

template <typename Matrix>
Eigen::VectorXd apply_cpa(const Matrix& m, const FilterKernel& kernel, const Eigen::VectorXd& x,
                          const ApplyCpaOptions& opt = {})
{
    return apply_cpa(m, kernel, Eigen::MatrixXd(x), opt).col(0);
}

/// Exact spectral filtering U g(Lambda) U^T X from a full eigendecomposition.
inline Eigen::MatrixXd apply_exact(const Spectrum& s, const SpectralFunction& g, const Eigen::MatrixXd& x)
{
    const Eigen::VectorXd response = s.eigenvalues.unaryExpr([&](double l) { return g(l); });
    return s.eigenvectors * (response.asDiagonal() * (s.eigenvectors.transpose() * x));
}

} // namespace edgesample
