#pragma once

// Test-only helpers: random graph families and brute-force oracles that do not
// reuse the library code paths they check.

#include "edgesample/edgesample.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace testing_support {

using namespace edgesample;

inline Graph random_tree(std::size_t n, Rng& rng, bool weighted)
{
    std::vector<Edge> edges;
    for (NodeId v = 1; v < n; ++v)
        edges.push_back({static_cast<NodeId>(rng.below(v)), v, weighted ? rng.uniform(0.2, 3.0) : 1.0});
    return build_graph(n, edges);
}

/// Mixed-family random graph with N in [min_n, max_n]; never edgeless.
inline Graph random_graph(std::size_t min_n, std::size_t max_n, Rng& rng, bool weighted, int family)
{
    const std::size_t n = min_n + rng.below(max_n - min_n + 1);
    Graph g;
    switch (family % 4) {
    case 0: g = gen_erdos_renyi(n, rng.uniform(0.1, 0.5), rng.below(1u << 30), {true}).graph; break;
    case 1: g = random_tree(n, rng, true); break;
    case 2: g = gen_sensor(n, std::min<std::size_t>(4, n - 1), rng.below(1u << 30)).graph; break;
    default:
        g = gen_community(n, std::min<std::size_t>(3, n), rng.below(1u << 30)).graph;
        break;
    }
    if (g.num_edges() == 0)
        g = random_tree(n, rng, true);
    return weighted ? g : g.unweighted();
}

/// W_L straight from its definition: for every pair of distinct edges, sum
/// sqrt(w_a) sqrt(w_b) over the nodes they share.
inline Eigen::MatrixXd line_adjacency_oracle(const Graph& g)
{
    const auto m = static_cast<Eigen::Index>(g.num_edges());
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b) {
            if (a == b)
                continue;
            const Edge& ea = g.edges()[static_cast<std::size_t>(a)];
            const Edge& eb = g.edges()[static_cast<std::size_t>(b)];
            for (NodeId v : {ea.i, ea.j})
                if (v == eb.i || v == eb.j)
                    w(a, b) += std::sqrt(ea.w) * std::sqrt(eb.w);
        }
    return w;
}

/// Dense oriented incidence built from the edge list.
inline Eigen::MatrixXd oriented_incidence_oracle(const Graph& g)
{
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g.num_nodes()),
                                              static_cast<Eigen::Index>(g.num_edges()));
    for (std::size_t a = 0; a < g.num_edges(); ++a) {
        const Edge& e = g.edges()[a];
        b(static_cast<Eigen::Index>(e.i), static_cast<Eigen::Index>(a)) = std::sqrt(e.w);
        b(static_cast<Eigen::Index>(e.j), static_cast<Eigen::Index>(a)) = -std::sqrt(e.w);
    }
    return b;
}

/// f(M) for a symmetric M via dense eigendecomposition.
inline Eigen::MatrixXd dense_matrix_function(const Eigen::MatrixXd& m, const std::function<double(double)>& f)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    Eigen::VectorXd fl = es.eigenvalues().unaryExpr(f);
    return es.eigenvectors() * fl.asDiagonal() * es.eigenvectors().transpose();
}

/// Greedy selection recomputed from scratch at every step over the dense |T|.
inline std::vector<std::size_t> greedy_oracle(const Eigen::MatrixXd& t, double eta, std::size_t size)
{
    const Eigen::MatrixXd abs_t = t.cwiseAbs();
    const auto n = abs_t.cols();
    std::vector<std::size_t> chosen;
    std::vector<bool> taken(static_cast<std::size_t>(n), false);
    for (std::size_t step = 0; step < size; ++step) {
        Eigen::VectorXd covered = Eigen::VectorXd::Zero(n);
        for (std::size_t c : chosen)
            covered += abs_t.col(static_cast<Eigen::Index>(c));
        const Eigen::VectorXd ramp = (Eigen::VectorXd::Constant(n, eta) - covered).cwiseMax(0.0);
        std::optional<std::size_t> best;
        double best_score = 0.0;
        for (Eigen::Index a = 0; a < n; ++a) {
            if (taken[static_cast<std::size_t>(a)])
                continue;
            const double score = ramp.dot(abs_t.col(a));
            if (!best || score > best_score + 1e-9 * std::max(1.0, std::abs(best_score))) {
                best = static_cast<std::size_t>(a);
                best_score = score;
            }
        }
        chosen.push_back(*best);
        taken[*best] = true;
    }
    return chosen;
}

inline double frobenius_gap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).norm(); }

template <typename F>
ErrorCode error_code_of(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an edgesample::Error";
    return ErrorCode::InvalidArgument;
}

} // namespace testing_support
