#pragma once

#include "edgesample/graph.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace edgesample {

/**
 * Line graph of an undirected graph: one line-node per original edge, two
 * line-nodes adjacent when the original edges share an endpoint. The weight
 * of the line-edge through shared node i is sqrt(w_alpha) * sqrt(w_beta),
 * i.e. the off-diagonal part of B~^T B~.
 */
struct LineGraph {
    SparseMatrix adjacency;                            ///< W_L, |E| x |E|, zero diagonal
    SparseMatrix laplacian;                            ///< L_L = D_L - W_L
    std::vector<std::pair<NodeId, NodeId>> edge_map;   ///< line-node alpha -> original (m, n)
    std::size_t num_line_edges = 0;                    ///< |E_L|
};

struct EdgeLaplacian {
    SparseMatrix matrix; ///< L_e = B-bar^T B-bar
    IncidenceKind source = IncidenceKind::Oriented;
};

inline void require_edges(const Graph& g)
{
    if (g.num_edges() == 0)
        throw Error(ErrorCode::EmptyEdgeSet, "graph has no edges");
}

/// Builds W_L by visiting pairs of edges incident to each node (cost sum_i k_i^2).
inline LineGraph line_graph(const Graph& g)
{
    require_edges(g);
    const auto m = static_cast<Eigen::Index>(g.num_edges());
    std::vector<Triplet> triplets;
    std::vector<double> line_degree(g.num_edges(), 0.0);
    std::size_t line_edges = 0;
    for (const auto& list : incident_edges(g)) {
        for (std::size_t p = 0; p < list.size(); ++p) {
            const EdgeId a = list[p].second;
            for (std::size_t q = p + 1; q < list.size(); ++q) {
                const EdgeId b = list[q].second;
                const double v = std::sqrt(g.edges()[a].w) * std::sqrt(g.edges()[b].w);
                triplets.emplace_back(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b), v);
                triplets.emplace_back(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a), v);
                line_degree[a] += v;
                line_degree[b] += v;
                ++line_edges;
            }
        }
    }
    LineGraph lg;
    lg.adjacency.resize(m, m);
    lg.adjacency.setFromTriplets(triplets.begin(), triplets.end());
    for (auto& t : triplets)
        t = Triplet(t.row(), t.col(), -t.value());
    for (std::size_t a = 0; a < g.num_edges(); ++a)
        triplets.emplace_back(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a), line_degree[a]);
    lg.laplacian.resize(m, m);
    lg.laplacian.setFromTriplets(triplets.begin(), triplets.end());
    lg.edge_map.reserve(g.num_edges());
    for (const Edge& e : g.edges())
        lg.edge_map.emplace_back(e.i, e.j);
    lg.num_line_edges = line_edges;
    return lg;
}

/// Line graph of the same topology with all weights set to 1.
inline LineGraph unweighted_line_graph(const Graph& g) { return line_graph(g.unweighted()); }

inline EdgeLaplacian edge_laplacian(const Graph& g)
{
    require_edges(g);
    const SparseMatrix b = incidence(g, IncidenceKind::Oriented).entries;
    return {SparseMatrix(b.transpose() * b), IncidenceKind::Oriented};
}

enum class DegreeMode { Unweighted, Weighted, Oriented };

/// Line-graph degree of edge alpha = (m, n) from node-level degrees alone.
inline double line_degree_closed_form(const Graph& g, const DegreeVectors& deg, EdgeId alpha,
                                      DegreeMode mode)
{
    const Edge& e = g.edge(alpha);
    const auto m = static_cast<Eigen::Index>(e.i);
    const auto n = static_cast<Eigen::Index>(e.j);
    const double s = std::sqrt(e.w);
    switch (mode) {
    case DegreeMode::Unweighted: return deg.unweighted[m] + deg.unweighted[n] - 2.0;
    case DegreeMode::Weighted: return s * (deg.sqrt_sum[m] + deg.sqrt_sum[n]) - 2.0 * e.w;
    case DegreeMode::Oriented: return s * (deg.oriented[m] - deg.oriented[n]);
    }
    return 0.0;
}

inline double line_degree_closed_form(const Graph& g, EdgeId alpha, DegreeMode mode)
{
    return line_degree_closed_form(g, degrees(g), alpha, mode);
}

/// Discrepancies between the closed-form line degrees and the directly built operators.
struct LineDegreeReport {
    double max_abs_unweighted = 0.0; ///< vs. row sums of the unweighted W_L
    double max_abs_weighted = 0.0;   ///< vs. row sums of W_L
    double max_rel_weighted = 0.0;   ///< same, relative to max(1, |row sum|)
    double max_abs_oriented = 0.0;   ///< vs. row sums of L_e
};

inline Eigen::VectorXd row_sums(const SparseMatrix& m)
{
    return m * Eigen::VectorXd::Ones(m.cols());
}

inline LineDegreeReport verify_line_degrees(const Graph& g)
{
    const DegreeVectors deg = degrees(g);
    const Eigen::VectorXd weighted = row_sums(line_graph(g).adjacency);
    const Eigen::VectorXd unweighted = row_sums(unweighted_line_graph(g).adjacency);
    const Eigen::VectorXd oriented = row_sums(edge_laplacian(g).matrix);
    LineDegreeReport r;
    for (std::size_t a = 0; a < g.num_edges(); ++a) {
        const auto i = static_cast<Eigen::Index>(a);
        const double du = std::abs(line_degree_closed_form(g, deg, a, DegreeMode::Unweighted) - unweighted[i]);
        const double dw = std::abs(line_degree_closed_form(g, deg, a, DegreeMode::Weighted) - weighted[i]);
        const double d_o = std::abs(line_degree_closed_form(g, deg, a, DegreeMode::Oriented) - oriented[i]);
        r.max_abs_unweighted = std::max(r.max_abs_unweighted, du);
        r.max_abs_weighted = std::max(r.max_abs_weighted, dw);
        r.max_rel_weighted = std::max(r.max_rel_weighted, dw / std::max(1.0, std::abs(weighted[i])));
        r.max_abs_oriented = std::max(r.max_abs_oriented, d_o);
    }
    return r;
}

} // namespace edgesample
