#pragma once

#include "edgesample/chebyshev.hpp"
#include "edgesample/line_graph.hpp"

#include <cmath>

namespace edgesample {

enum class LocalizationMode {
    ExactEig,         ///< sqrt(|E|) V g(Lambda) V^T from a full eigendecomposition
    CpaLine,          ///< sqrt(|E|) g(M) by Chebyshev recurrence on the |E| x |E| operator
    CpaAccelerated,   ///< sqrt(|E|) B^T g'(L) B with g' applied on the node Laplacian by Chebyshev recurrence
    ExactAccelerated, ///< same, with g'(L) from a full eigendecomposition of L
};

constexpr std::string_view to_string(LocalizationMode mode) noexcept
{
    switch (mode) {
    case LocalizationMode::ExactEig: return "exact_eig";
    case LocalizationMode::CpaLine: return "cpa_line";
    case LocalizationMode::CpaAccelerated: return "cpa_accelerated";
    case LocalizationMode::ExactAccelerated: return "exact_accelerated";
    }
    return "unknown";
}

/// Column alpha is the kernel atom centered at edge alpha. Entries below the
/// prune threshold are dropped; `nonzeros` (J) counts the rest.
struct LocalizationOperator {
    SparseMatrix t;
    LocalizationMode mode = LocalizationMode::ExactEig;
    std::size_t nonzeros = 0;
    double epsilon = 0.0;

    [[nodiscard]] Eigen::Index size() const noexcept { return t.cols(); }
};

struct LocalizationOptions {
    double prune_threshold = 1e-10;
    /// Largest operator accepted by the dense eigendecomposition paths.
    Eigen::Index dense_limit = 4000;
};

/// Decaying heat-type kernel g(lambda) = exp(-tau * lambda / lambda_ub).
inline SpectralFunction decay_kernel(double tau, double lambda_ub)
{
    return [tau, lambda_ub](double lambda) { return std::exp(-tau * lambda / lambda_ub); };
}

namespace detail {

inline LocalizationOperator finish_operator(Eigen::MatrixXd dense, LocalizationMode mode, double epsilon,
                                            const LocalizationOptions& opt)
{
    dense = (0.5 * (dense + dense.transpose())).eval();
    std::vector<Triplet> triplets;
    for (Eigen::Index c = 0; c < dense.cols(); ++c)
        for (Eigen::Index r = 0; r < dense.rows(); ++r)
            if (std::abs(dense(r, c)) >= opt.prune_threshold)
                triplets.emplace_back(r, c, dense(r, c));
    LocalizationOperator op;
    op.t.resize(dense.rows(), dense.cols());
    op.t.setFromTriplets(triplets.begin(), triplets.end());
    op.t.makeCompressed();
    op.mode = mode;
    op.nonzeros = static_cast<std::size_t>(op.t.nonZeros());
    op.epsilon = epsilon;
    return op;
}

inline void guard_dense(Eigen::Index n, const LocalizationOptions& opt)
{
    if (n > opt.dense_limit)
        throw Error(ErrorCode::SizeLimit, "dense eigendecomposition of size " + std::to_string(n) +
                                              " exceeds limit " + std::to_string(opt.dense_limit));
}

} // namespace detail

/// T = sqrt(|E|) g(M) for an |E| x |E| PSD operator M (edge Laplacian or line-graph Laplacian).
inline LocalizationOperator localization_exact(const SparseMatrix& op, const SpectralFunction& g,
                                               const LocalizationOptions& opt = {})
{
    detail::guard_dense(op.rows(), opt);
    const Spectrum s = eig_sym(op);
    const double scale = std::sqrt(static_cast<double>(op.rows()));
    const Eigen::VectorXd response = s.eigenvalues.unaryExpr([&](double l) { return g(l); });
    Eigen::MatrixXd t = scale * s.eigenvectors * response.asDiagonal() * s.eigenvectors.transpose();
    return detail::finish_operator(std::move(t), LocalizationMode::ExactEig, 0.0, opt);
}

inline LocalizationOperator localization_cpa_line(const SparseMatrix& op, const FilterKernel& kernel,
                                                  const LocalizationOptions& opt = {})
{
    const double scale = std::sqrt(static_cast<double>(op.rows()));
    Eigen::MatrixXd t = scale * apply_cpa(op, kernel, Eigen::MatrixXd(Eigen::MatrixXd::Identity(op.rows(), op.cols())));
    return detail::finish_operator(std::move(t), LocalizationMode::CpaLine, 0.0, opt);
}

struct AcceleratedOptions {
    double epsilon = 1e-8;
    bool use_cpa = true;
    int degree = 6;
    /// Chebyshev range; <= 0 means lambda_max_bound of the node Laplacian.
    double lambda_ub = 0.0;
};

/**
 * Localization operator of the edge Laplacian computed on the node domain:
 * T^ = sqrt(|E|) B^T g'(L) B with g'(lambda) = g(lambda) / (epsilon + lambda).
 *
 * On the row space of B this reproduces sqrt(|E|) g(L_e); the null space of
 * L_e (the cycle space) is mapped to zero instead of g(0).
 */
inline LocalizationOperator localization_accelerated(const Graph& graph, const SpectralFunction& g,
                                                     const AcceleratedOptions& acc = {},
                                                     const LocalizationOptions& opt = {})
{
    require_edges(graph);
    if (!(acc.epsilon > 0.0))
        throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
    const SparseMatrix b = incidence(graph, IncidenceKind::Oriented).entries;
    const SparseMatrix l = laplacian(graph);
    const double eps = acc.epsilon;
    const SpectralFunction g_prime = [g, eps](double lambda) { return g(lambda) / (eps + lambda); };
    const Eigen::MatrixXd b_dense(b);
    Eigen::MatrixXd filtered;
    if (acc.use_cpa) {
        const double ub = acc.lambda_ub > 0.0 ? acc.lambda_ub : lambda_max_bound(l);
        const FilterKernel kernel = cheb_fit(g_prime, ub, acc.degree);
        filtered = apply_cpa(l, kernel, b_dense);
    } else {
        detail::guard_dense(l.rows(), opt);
        filtered = apply_exact(eig_sym(l), g_prime, b_dense);
    }
    const double scale = std::sqrt(static_cast<double>(graph.num_edges()));
    Eigen::MatrixXd t = scale * (b.transpose() * filtered);
    return detail::finish_operator(std::move(t),
                                   acc.use_cpa ? LocalizationMode::CpaAccelerated : LocalizationMode::ExactAccelerated,
                                   eps, opt);
}

} // namespace edgesample
