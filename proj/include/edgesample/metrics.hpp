#pragma once

#include "edgesample/chebyshev.hpp"
#include "edgesample/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace edgesample {

// ---------------------------------------------------------------------------
// Heat diffusion

/// Binary signal with `support` ones at uniformly chosen nodes.
inline Eigen::VectorXd random_support_signal(std::size_t num_nodes, std::size_t support, Rng& rng)
{
    support = std::min(support, num_nodes);
    std::vector<std::size_t> ids(num_nodes);
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_nodes));
    for (std::size_t s = 0; s < support; ++s) {
        const std::size_t pick = s + static_cast<std::size_t>(rng.below(num_nodes - s));
        std::swap(ids[s], ids[pick]);
        x[static_cast<Eigen::Index>(ids[s])] = 1.0;
    }
    return x;
}

inline SpectralFunction heat_kernel(double t)
{
    return [t](double lambda) { return std::exp(-t * lambda); };
}

inline Eigen::VectorXd heat_diffuse(const Spectrum& s, const Eigen::VectorXd& x, double t)
{
    if (!(t > 0.0))
        throw Error(ErrorCode::InvalidArgument, "diffusion time must be positive");
    if (s.size() != x.size())
        throw Error(ErrorCode::DimensionMismatch, "signal length differs from graph size");
    return apply_exact(s, heat_kernel(t), x).col(0);
}

struct DiffusionOptions {
    Eigen::Index dense_limit = 2000; ///< larger graphs use the Chebyshev path
    int cpa_degree = 30;
};

/// y = exp(-t L) x.
inline Eigen::VectorXd heat_diffuse(const SparseMatrix& lap, const Eigen::VectorXd& x, double t,
                                    const DiffusionOptions& opt = {})
{
    if (lap.rows() <= opt.dense_limit)
        return heat_diffuse(eig_sym(lap), x, t);
    if (!(t > 0.0))
        throw Error(ErrorCode::InvalidArgument, "diffusion time must be positive");
    const FilterKernel kernel = cheb_fit(heat_kernel(t), lambda_max_bound(lap), opt.cpa_degree);
    return apply_cpa(lap, kernel, x);
}

struct Mse {
    double value = 0.0;
    double db = 0.0;
};

inline constexpr double kMseFloorDb = -120.0;

inline Mse diffusion_mse(const Eigen::VectorXd& y0, const Eigen::VectorXd& y1)
{
    if (y0.size() != y1.size())
        throw Error(ErrorCode::DimensionMismatch, "signal lengths differ");
    if (y0.size() == 0)
        return {0.0, kMseFloorDb};
    const double mse = (y0 - y1).squaredNorm() / static_cast<double>(y0.size());
    const double db = mse > 0.0 ? std::max(kMseFloorDb, 10.0 * std::log10(mse)) : kMseFloorDb;
    return {mse, db};
}

// ---------------------------------------------------------------------------
// Spectral clustering

struct KMeansOptions {
    int restarts = 20;
    int max_iterations = 300;
};

/// Lloyd's k-means with k-means++ seeding; the restart with the lowest inertia wins.
inline std::vector<std::size_t> kmeans(const Eigen::MatrixXd& points, std::size_t k, Rng& rng,
                                       const KMeansOptions& opt = {})
{
    const Eigen::Index n = points.rows();
    std::vector<std::size_t> best_labels(static_cast<std::size_t>(n), 0);
    double best_inertia = std::numeric_limits<double>::infinity();
    const auto kk = static_cast<Eigen::Index>(k);
    for (int restart = 0; restart < opt.restarts; ++restart) {
        Eigen::MatrixXd centers(kk, points.cols());
        centers.row(0) = points.row(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n))));
        Eigen::VectorXd dist2 = (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
        for (Eigen::Index c = 1; c < kk; ++c) {
            const double total = dist2.sum();
            Eigen::Index pick = 0;
            if (total > 0.0) {
                double u = rng.uniform() * total;
                for (pick = 0; pick < n - 1; ++pick) {
                    u -= dist2[pick];
                    if (u < 0.0)
                        break;
                }
            } else {
                pick = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
            }
            centers.row(c) = points.row(pick);
            dist2 = dist2.cwiseMin((points.rowwise() - centers.row(c)).rowwise().squaredNorm());
        }

        std::vector<std::size_t> labels(static_cast<std::size_t>(n), 0);
        double inertia = 0.0;
        for (int it = 0; it < opt.max_iterations; ++it) {
            bool changed = false;
            inertia = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                Eigen::Index arg = 0;
                const double d = (centers.rowwise() - points.row(i)).rowwise().squaredNorm().minCoeff(&arg);
                inertia += d;
                auto& label = labels[static_cast<std::size_t>(i)];
                changed = changed || label != static_cast<std::size_t>(arg);
                label = static_cast<std::size_t>(arg);
            }
            if (!changed && it > 0)
                break;
            Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(kk, points.cols());
            std::vector<std::size_t> counts(k, 0);
            for (Eigen::Index i = 0; i < n; ++i) {
                sums.row(static_cast<Eigen::Index>(labels[static_cast<std::size_t>(i)])) += points.row(i);
                ++counts[labels[static_cast<std::size_t>(i)]];
            }
            for (Eigen::Index c = 0; c < kk; ++c) {
                if (counts[static_cast<std::size_t>(c)] > 0) {
                    centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
                } else {
                    // Empty cluster: move it to the point farthest from its center.
                    Eigen::Index far = 0;
                    double far_d = -1.0;
                    for (Eigen::Index i = 0; i < n; ++i) {
                        const double d = (points.row(i) -
                                          centers.row(static_cast<Eigen::Index>(labels[static_cast<std::size_t>(i)])))
                                             .squaredNorm();
                        if (d > far_d) {
                            far_d = d;
                            far = i;
                        }
                    }
                    centers.row(c) = points.row(far);
                }
            }
        }
        if (inertia < best_inertia) {
            best_inertia = inertia;
            best_labels = labels;
        }
    }
    return best_labels;
}

struct SpectralClusterOptions {
    KMeansOptions kmeans;
    double distinct_tolerance = 1e-10;
};

/**
 * Normalized spectral clustering: the k smallest eigenvectors of
 * I - D^{-1/2} W D^{-1/2}, rows normalized to unit length, then k-means.
 * Isolated nodes get a zero degree scaling and keep a zero embedding row.
 */
inline std::vector<std::size_t> spectral_cluster(const Graph& g, std::size_t k, std::uint64_t seed,
                                                 const SpectralClusterOptions& opt = {})
{
    if (k < 2)
        throw Error(ErrorCode::InvalidArgument, "spectral clustering needs k >= 2");
    const auto n = static_cast<Eigen::Index>(g.num_nodes());
    if (static_cast<Eigen::Index>(k) > n)
        throw Error(ErrorCode::DegenerateEmbedding, "more clusters than nodes");
    const Eigen::VectorXd d = degrees(g).weighted;
    const Eigen::VectorXd scale = d.unaryExpr([](double v) { return v > 0.0 ? 1.0 / std::sqrt(v) : 0.0; });
    Eigen::MatrixXd norm_lap = Eigen::MatrixXd::Identity(n, n);
    for (const Edge& e : g.edges()) {
        const auto i = static_cast<Eigen::Index>(e.i);
        const auto j = static_cast<Eigen::Index>(e.j);
        const double v = e.w * scale[i] * scale[j];
        norm_lap(i, j) -= v;
        norm_lap(j, i) -= v;
    }
    const Spectrum s = eig_sym(norm_lap);
    Eigen::MatrixXd emb = s.eigenvectors.leftCols(static_cast<Eigen::Index>(k));
    for (Eigen::Index i = 0; i < n; ++i) {
        const double len = emb.row(i).norm();
        if (len > 0.0)
            emb.row(i) /= len;
    }
    std::size_t distinct = 0;
    for (Eigen::Index i = 0; i < n && distinct < k; ++i) {
        bool seen = false;
        for (Eigen::Index j = 0; j < i && !seen; ++j)
            seen = (emb.row(i) - emb.row(j)).cwiseAbs().maxCoeff() <= opt.distinct_tolerance;
        if (!seen)
            ++distinct;
    }
    if (distinct < k)
        throw Error(ErrorCode::DegenerateEmbedding, "fewer than " + std::to_string(k) + " distinct embedding rows");
    Rng rng(seed);
    return kmeans(emb, k, rng, opt.kmeans);
}

/**
 * Maximum-weight assignment on a square matrix (Hungarian algorithm, O(k^3)).
 * Returns assignment[row] = column.
 */
inline std::vector<std::size_t> max_weight_assignment(const Eigen::MatrixXd& weight)
{
    const auto k = static_cast<std::size_t>(weight.rows());
    constexpr double inf = std::numeric_limits<double>::infinity();
    // 1-based potentials formulation minimizing cost = -weight.
    std::vector<double> u(k + 1, 0.0), v(k + 1, 0.0), minv(k + 1);
    std::vector<std::size_t> p(k + 1, 0), way(k + 1, 0);
    std::vector<bool> used(k + 1);
    for (std::size_t i = 1; i <= k; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= k; ++j) {
                if (used[j])
                    continue;
                const double cur = -weight(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) -
                                   u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= k; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> assignment(k, 0);
    for (std::size_t j = 1; j <= k; ++j)
        if (p[j] != 0)
            assignment[p[j] - 1] = j - 1;
    return assignment;
}

/// C = 1 - (1/N) sum_i s_i after aligning the two labelings by maximum agreement.
inline double cluster_inconsistency(std::span<const std::size_t> labels0, std::span<const std::size_t> labels1)
{
    if (labels0.size() != labels1.size())
        throw Error(ErrorCode::DimensionMismatch, "label vectors differ in length");
    if (labels0.empty())
        return 0.0;
    const std::size_t k0 = *std::max_element(labels0.begin(), labels0.end()) + 1;
    const std::size_t k1 = *std::max_element(labels1.begin(), labels1.end()) + 1;
    if (k0 != k1)
        throw Error(ErrorCode::KMismatch, std::to_string(k0) + " vs " + std::to_string(k1) + " clusters");
    const auto k = static_cast<Eigen::Index>(k0);
    Eigen::MatrixXd agree = Eigen::MatrixXd::Zero(k, k);
    for (std::size_t i = 0; i < labels0.size(); ++i)
        agree(static_cast<Eigen::Index>(labels0[i]), static_cast<Eigen::Index>(labels1[i])) += 1.0;
    const std::vector<std::size_t> match = max_weight_assignment(agree);
    double same = 0.0;
    for (Eigen::Index r = 0; r < k; ++r)
        same += agree(r, static_cast<Eigen::Index>(match[static_cast<std::size_t>(r)]));
    return 1.0 - same / static_cast<double>(labels0.size());
}

/// Nodes with no incident edge in (V, F).
inline std::size_t isolated_nodes(const Graph& g, std::span<const EdgeId> kept)
{
    std::vector<bool> touched(g.num_nodes(), false);
    for (EdgeId a : kept) {
        const Edge& e = g.edge(a);
        touched[e.i] = true;
        touched[e.j] = true;
    }
    return static_cast<std::size_t>(std::count(touched.begin(), touched.end(), false));
}

} // namespace edgesample
