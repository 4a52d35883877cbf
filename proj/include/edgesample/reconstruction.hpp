#pragma once

#include "edgesample/random.hpp"
#include "edgesample/spectral.hpp"

#include <Eigen/QR>

#include <cmath>
#include <span>

namespace edgesample {

/// Bandlimited edge-weight model: K low-frequency coefficients plus white noise on all of them.
struct SynthesisSpec {
    Eigen::Index bandwidth = 1;
    double signal_stddev = std::sqrt(0.2);
    double noise_stddev = 0.1;
    std::uint64_t seed = 0;
};

/**
 * w = V w_hat with w_hat = [w_K; 0] + n. V is the eigenvector matrix of the
 * unweighted line graph's Laplacian (ascending frequency). The K signal
 * coefficients are drawn first, then the |E| noise values.
 */
inline Eigen::VectorXd synth_edge_weights(const Spectrum& basis, const SynthesisSpec& spec)
{
    const Eigen::Index m = basis.size();
    if (spec.bandwidth <= 0 || spec.bandwidth > m)
        throw Error(ErrorCode::BadBandwidth, "K=" + std::to_string(spec.bandwidth) + " for " +
                                                 std::to_string(m) + " edges");
    if (spec.signal_stddev < 0.0 || spec.noise_stddev < 0.0)
        throw Error(ErrorCode::InvalidArgument, "standard deviations must be nonnegative");
    Rng rng(spec.seed);
    Eigen::VectorXd w_hat = Eigen::VectorXd::Zero(m);
    for (Eigen::Index a = 0; a < spec.bandwidth; ++a)
        w_hat[a] = rng.normal(0.0, spec.signal_stddev);
    for (Eigen::Index a = 0; a < m; ++a)
        w_hat[a] += rng.normal(0.0, spec.noise_stddev);
    return basis.eigenvectors * w_hat;
}

struct Interpolation {
    Eigen::VectorXd values;
    bool rank_deficient = false; ///< fewer samples than the bandwidth
};

/**
 * Ridge-regularized bandlimited least squares:
 *   c = argmin ||V_K[F, :] c - w_F||^2 + ridge ||c||^2,  w_rec = V_K c.
 * Solved as a stacked least-squares problem with a complete orthogonal
 * decomposition, which also covers ridge = 0 with rank-deficient samples.
 */
inline Interpolation interp_bandlimited(const Eigen::MatrixXd& low_basis, std::span<const std::size_t> sampled,
                                        const Eigen::VectorXd& sampled_values, double ridge = 1e-8)
{
    if (static_cast<Eigen::Index>(sampled.size()) != sampled_values.size())
        throw Error(ErrorCode::DimensionMismatch, "sample ids and values differ in length");
    const Eigen::Index k = low_basis.cols();
    const auto f = static_cast<Eigen::Index>(sampled.size());
    const double root = std::sqrt(std::max(0.0, ridge));
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(f + k, k);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(f + k);
    for (Eigen::Index r = 0; r < f; ++r) {
        const auto id = static_cast<Eigen::Index>(sampled[static_cast<std::size_t>(r)]);
        if (id >= low_basis.rows())
            throw Error(ErrorCode::InvalidEdgeId, "sample id " + std::to_string(id));
        a.row(r) = low_basis.row(id);
        rhs[r] = sampled_values[r];
    }
    a.bottomRows(k).diagonal().setConstant(root);
    const Eigen::VectorXd c = a.completeOrthogonalDecomposition().solve(rhs);
    return {low_basis * c, f < k};
}

struct ReconstructionError {
    double absolute = 0.0;   ///< ||w - w_rec||_2
    double normalized = 0.0; ///< absolute / ||w||_2
};

inline ReconstructionError reconstruction_error(const Eigen::VectorXd& w, const Eigen::VectorXd& w_rec)
{
    if (w.size() != w_rec.size())
        throw Error(ErrorCode::DimensionMismatch, "signal lengths differ");
    const double abs = (w - w_rec).norm();
    const double ref = w.norm();
    return {abs, ref > 0.0 ? abs / ref : abs};
}

} // namespace edgesample
