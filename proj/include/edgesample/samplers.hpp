#pragma once

#include "edgesample/localization.hpp"
#include "edgesample/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace edgesample {

enum class Method { Nslg, Anslg, MaxDegree, NetMelt, GSparse };

constexpr std::string_view to_string(Method m) noexcept
{
    switch (m) {
    case Method::Nslg: return "nslg";
    case Method::Anslg: return "anslg";
    case Method::MaxDegree: return "maxdegree";
    case Method::NetMelt: return "netmelt";
    case Method::GSparse: return "gsparse";
    }
    return "unknown";
}

inline std::optional<Method> parse_method(std::string_view name)
{
    for (Method m : {Method::Nslg, Method::Anslg, Method::MaxDegree, Method::NetMelt, Method::GSparse})
        if (to_string(m) == name)
            return m;
    return std::nullopt;
}

inline constexpr std::string_view kMethodList = "nslg, anslg, maxdegree, netmelt, gsparse";

struct SampleResult {
    std::vector<EdgeId> selected;
    Method method = Method::Nslg;
    std::vector<double> scores; ///< score of each selected edge at the step it was chosen
    /// GSparse only: reweighted value of each selected edge, aligned with `selected`.
    std::optional<std::vector<double>> new_weights;
    std::uint64_t seed = 0;
    std::size_t requested_size = 0;
    std::size_t gsparse_q = 0;
    double preparation_ms = 0.0;
    double selection_ms = 0.0;
};

namespace detail {

/// Greedy tie rule: a later (higher-index) candidate wins only if clearly larger.
inline bool clearly_greater(double score, double best) noexcept
{
    return score > best + 1e-9 * std::max(1.0, std::abs(best));
}

inline void check_size(std::size_t size, std::size_t num_edges)
{
    if (size > num_edges)
        throw Error(ErrorCode::SizeTooLarge, "requested " + std::to_string(size) + " of " +
                                                 std::to_string(num_edges) + " edges");
}

inline double elapsed_ms(std::chrono::steady_clock::time_point since)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

/// Ranks by descending score with ties broken by ascending edge index. Scores are
/// quantized to 12 significant digits first, so rounding noise does not reorder ties.
inline std::vector<EdgeId> rank_descending(const std::vector<double>& scores)
{
    double scale = 0.0;
    for (double s : scores)
        scale = std::max(scale, std::abs(s));
    std::vector<long long> key(scores.size(), 0);
    if (scale > 0.0)
        for (std::size_t a = 0; a < scores.size(); ++a)
            key[a] = std::llround(scores[a] / scale * 1e12);
    std::vector<EdgeId> order(scores.size());
    std::iota(order.begin(), order.end(), EdgeId{0});
    std::stable_sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) { return key[a] > key[b]; });
    return order;
}

} // namespace detail

/// Default eta: the largest column l1-norm of T.
inline double default_eta(const LocalizationOperator& op)
{
    double eta = 0.0;
    for (Eigen::Index c = 0; c < op.t.outerSize(); ++c) {
        double norm = 0.0;
        for (SparseMatrix::InnerIterator it(op.t, c); it; ++it)
            norm += std::abs(it.value());
        eta = std::max(eta, norm);
    }
    return eta;
}

/**
 * Greedy localization-operator sampling.
 *
 * Each step picks the unselected alpha maximizing
 *   < R(eta 1 - sum_{beta in S} |T_beta|), |T_alpha| >,
 * R the ramp max(x, 0). The residual is updated in place after each pick, so a
 * step costs O(J). Ties go to the lowest edge index.
 */
inline SampleResult fastgsss_select(const LocalizationOperator& op, std::size_t size,
                                    std::optional<double> eta = std::nullopt)
{
    const auto n = static_cast<std::size_t>(op.size());
    detail::check_size(size, n);
    const double level = eta.value_or(default_eta(op));
    if (!(level > 0.0))
        throw Error(ErrorCode::InvalidArgument, "eta must be positive");

    Eigen::VectorXd residual = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), level);
    std::vector<bool> taken(n, false);
    SampleResult result;
    result.requested_size = size;
    result.selected.reserve(size);
    result.scores.reserve(size);
    for (std::size_t step = 0; step < size; ++step) {
        const Eigen::VectorXd ramp = residual.cwiseMax(0.0);
        std::optional<EdgeId> best;
        double best_score = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            if (taken[a])
                continue;
            double score = 0.0;
            for (SparseMatrix::InnerIterator it(op.t, static_cast<Eigen::Index>(a)); it; ++it)
                score += ramp[it.row()] * std::abs(it.value());
            if (!best || detail::clearly_greater(score, best_score)) {
                best = a;
                best_score = score;
            }
        }
        taken[*best] = true;
        result.selected.push_back(*best);
        result.scores.push_back(best_score);
        for (SparseMatrix::InnerIterator it(op.t, static_cast<Eigen::Index>(*best)); it; ++it)
            residual[it.row()] -= std::abs(it.value());
    }
    return result;
}

enum class LineOperator { EdgeLaplacian, LineLaplacian };
enum class FilterMode { Cpa, Exact };

struct NslgParams {
    LineOperator line_operator = LineOperator::EdgeLaplacian;
    FilterMode filter = FilterMode::Cpa;
    int cpa_degree = 6;
    double tau = 4.0;
    double epsilon = 1e-8; ///< accelerated variant only
    std::optional<double> eta;
    std::optional<double> lambda_ub;
    LocalizationOptions localization;
};

/// Kernel range shared by both line-graph samplers: the nonzero spectra of L and L_e coincide.
inline double spectral_range(const Graph& g, const NslgParams& params)
{
    if (params.lambda_ub)
        return *params.lambda_ub;
    if (params.line_operator == LineOperator::LineLaplacian)
        return lambda_max_bound(line_graph(g).laplacian);
    return lambda_max_bound(laplacian(g));
}

/// Localization operator used by the line-graph sampler.
inline LocalizationOperator nslg_operator(const Graph& g, const NslgParams& params = {})
{
    require_edges(g);
    const double ub = spectral_range(g, params);
    const SpectralFunction kernel = decay_kernel(params.tau, ub);
    const SparseMatrix op = params.line_operator == LineOperator::EdgeLaplacian ? edge_laplacian(g).matrix
                                                                                : line_graph(g).laplacian;
    if (params.filter == FilterMode::Exact)
        return localization_exact(op, kernel, params.localization);
    return localization_cpa_line(op, cheb_fit(kernel, ub, params.cpa_degree), params.localization);
}

/// Localization operator of the accelerated sampler (filtering on the node Laplacian).
inline LocalizationOperator anslg_operator(const Graph& g, const NslgParams& params = {})
{
    require_edges(g);
    NslgParams edge_params = params;
    edge_params.line_operator = LineOperator::EdgeLaplacian;
    const double ub = spectral_range(g, edge_params);
    AcceleratedOptions acc;
    acc.epsilon = params.epsilon;
    acc.use_cpa = params.filter == FilterMode::Cpa;
    acc.degree = params.cpa_degree;
    acc.lambda_ub = ub;
    return localization_accelerated(g, decay_kernel(params.tau, ub), acc, params.localization);
}

/// Node sampling on the line graph.
inline SampleResult nslg(const Graph& g, std::size_t size, const NslgParams& params = {})
{
    detail::check_size(size, g.num_edges());
    const auto t0 = std::chrono::steady_clock::now();
    const LocalizationOperator op = nslg_operator(g, params);
    const double prep = detail::elapsed_ms(t0);
    const auto t1 = std::chrono::steady_clock::now();
    SampleResult r = fastgsss_select(op, size, params.eta);
    r.selection_ms = detail::elapsed_ms(t1);
    r.preparation_ms = prep;
    r.method = Method::Nslg;
    return r;
}

/// Accelerated node sampling on the line graph.
inline SampleResult anslg(const Graph& g, std::size_t size, const NslgParams& params = {})
{
    detail::check_size(size, g.num_edges());
    const auto t0 = std::chrono::steady_clock::now();
    const LocalizationOperator op = anslg_operator(g, params);
    const double prep = detail::elapsed_ms(t0);
    const auto t1 = std::chrono::steady_clock::now();
    SampleResult r = fastgsss_select(op, size, params.eta);
    r.selection_ms = detail::elapsed_ms(t1);
    r.preparation_ms = prep;
    r.method = Method::Anslg;
    return r;
}

inline SampleResult ranked_prefix(const std::vector<double>& scores, std::size_t size, Method method)
{
    const std::vector<EdgeId> order = detail::rank_descending(scores);
    SampleResult r;
    r.method = method;
    r.requested_size = size;
    r.selected.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(size));
    for (EdgeId a : r.selected)
        r.scores.push_back(scores[a]);
    return r;
}

/// Edges with the largest k_m + k_n first.
inline SampleResult maxdegree_select(const Graph& g, std::size_t size)
{
    detail::check_size(size, g.num_edges());
    const auto t0 = std::chrono::steady_clock::now();
    const DegreeVectors deg = degrees(g);
    std::vector<double> scores(g.num_edges());
    for (std::size_t a = 0; a < g.num_edges(); ++a) {
        const Edge& e = g.edges()[a];
        scores[a] = deg.unweighted[static_cast<Eigen::Index>(e.i)] + deg.unweighted[static_cast<Eigen::Index>(e.j)];
    }
    SampleResult r = ranked_prefix(scores, size, Method::MaxDegree);
    r.selection_ms = detail::elapsed_ms(t0);
    return r;
}

/// Leading eigenvector of the weighted adjacency matrix, oriented to a nonnegative sum.
inline Eigen::VectorXd leading_adjacency_eigenvector(const Graph& g)
{
    const Spectrum s = eig_sym(adjacency(g));
    Eigen::VectorXd u = s.eigenvectors.col(s.size() - 1);
    if (u.sum() < 0.0)
        u = -u;
    return u;
}

/// Edges ranked by u(m) u(n), u the leading adjacency eigenvector.
inline SampleResult netmelt_select(const Graph& g, std::size_t size)
{
    detail::check_size(size, g.num_edges());
    const auto t0 = std::chrono::steady_clock::now();
    const Eigen::VectorXd u = leading_adjacency_eigenvector(g);
    std::vector<double> scores(g.num_edges());
    for (std::size_t a = 0; a < g.num_edges(); ++a) {
        const Edge& e = g.edges()[a];
        scores[a] = u[static_cast<Eigen::Index>(e.i)] * u[static_cast<Eigen::Index>(e.j)];
    }
    SampleResult r = ranked_prefix(scores, size, Method::NetMelt);
    r.selection_ms = detail::elapsed_ms(t0);
    return r;
}

/**
 * Effective resistance of every edge from the Laplacian pseudoinverse.
 * Disconnected graphs are handled per component: the pseudoinverse drops one
 * null direction per component, and resistances are only ever taken between
 * endpoints of an edge, which share a component.
 */
inline Eigen::VectorXd effective_resistance(const Graph& g)
{
    const Spectrum s = eig_sym(laplacian(g));
    const auto null_dim = static_cast<Eigen::Index>(connected_components(g).count);
    const Eigen::Index rank = s.size() - null_dim;
    const Eigen::MatrixXd u = s.eigenvectors.rightCols(rank);
    const Eigen::VectorXd inv = s.eigenvalues.tail(rank).cwiseInverse();
    Eigen::VectorXd r(static_cast<Eigen::Index>(g.num_edges()));
    for (std::size_t a = 0; a < g.num_edges(); ++a) {
        const Edge& e = g.edges()[a];
        const Eigen::VectorXd diff = u.row(static_cast<Eigen::Index>(e.i)) - u.row(static_cast<Eigen::Index>(e.j));
        r[static_cast<Eigen::Index>(a)] = diff.cwiseAbs2().dot(inv);
    }
    return r;
}

struct GSparseOptions {
    /// Throw Disconnected instead of falling back to per-component resistances.
    bool require_connected = false;
};

inline Eigen::VectorXd gsparse_probabilities(const Graph& g, const GSparseOptions& opt = {})
{
    require_edges(g);
    if (opt.require_connected && connected_components(g).count > 1)
        throw Error(ErrorCode::Disconnected, "effective resistance undefined across components");
    Eigen::VectorXd p = g.weights().cwiseProduct(effective_resistance(g));
    return p / p.sum();
}

/**
 * Effective-resistance sparsification: q i.i.d. draws with p_alpha proportional
 * to w_alpha R_alpha. Kept edges are the distinct draws (ascending edge index),
 * reweighted to w_alpha * count_alpha / (q p_alpha).
 */
inline SampleResult gsparse_select(const Graph& g, std::size_t q, std::uint64_t seed, const GSparseOptions& opt = {})
{
    if (q < 1)
        throw Error(ErrorCode::InvalidArgument, "GSparse needs q >= 1");
    const auto t0 = std::chrono::steady_clock::now();
    const Eigen::VectorXd p = gsparse_probabilities(g, opt);
    std::vector<double> cumulative(static_cast<std::size_t>(p.size()));
    std::partial_sum(p.begin(), p.end(), cumulative.begin());
    cumulative.back() = 1.0;
    std::vector<std::size_t> counts(g.num_edges(), 0);
    Rng rng(seed);
    for (std::size_t s = 0; s < q; ++s) {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        ++counts[static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cumulative.begin(), p.size() - 1))];
    }
    SampleResult r;
    r.method = Method::GSparse;
    r.seed = seed;
    r.gsparse_q = q;
    std::vector<double> weights;
    for (std::size_t a = 0; a < g.num_edges(); ++a) {
        if (counts[a] == 0)
            continue;
        r.selected.push_back(a);
        r.scores.push_back(p[static_cast<Eigen::Index>(a)]);
        weights.push_back(g.edges()[a].w * static_cast<double>(counts[a]) /
                          (static_cast<double>(q) * p[static_cast<Eigen::Index>(a)]));
    }
    r.new_weights = std::move(weights);
    r.requested_size = r.selected.size();
    r.selection_ms = detail::elapsed_ms(t0);
    return r;
}

/// Smallest q whose expected number of distinct draws reaches `target` edges.
inline std::size_t gsparse_q_for_size(const Eigen::VectorXd& p, double target)
{
    const auto expected = [&](double q) {
        double sum = 0.0;
        for (double pa : p)
            sum += 1.0 - std::pow(1.0 - pa, q);
        return sum;
    };
    std::size_t lo = 1;
    std::size_t hi = 1;
    constexpr std::size_t cap = std::size_t{1} << 40;
    while (expected(static_cast<double>(hi)) < target && hi < cap)
        hi *= 2;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (expected(static_cast<double>(mid)) < target)
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo;
}

/// Graph (V, F) a sample induces; GSparse samples carry their new weights.
inline Graph sampled_graph(const Graph& g, const SampleResult& r)
{
    Graph sub = g.edge_subgraph(r.selected);
    if (!r.new_weights)
        return sub;
    // edge_subgraph re-sorts; map the new weights through the original ids.
    std::vector<std::pair<EdgeId, double>> by_id;
    for (std::size_t k = 0; k < r.selected.size(); ++k)
        by_id.emplace_back(r.selected[k], (*r.new_weights)[k]);
    std::sort(by_id.begin(), by_id.end());
    std::vector<double> w;
    for (const auto& [id, value] : by_id)
        w.push_back(value);
    return sub.with_weights(w);
}

} // namespace edgesample
