#pragma once

#include "edgesample/error.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace edgesample {

using NodeId = std::size_t;
using EdgeId = std::size_t;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

struct Edge {
    NodeId i = 0;
    NodeId j = 0;
    double w = 1.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

/**
 * Undirected weighted graph without self-loops.
 *
 * Edges are stored with i < j, sorted lexicographically by (i, j). The position
 * of an edge in that order is its edge index, used by every incidence matrix,
 * line graph and sampler in the library. Instances are immutable.
 */
class Graph {
public:
    Graph() = default;

    [[nodiscard]] std::size_t num_nodes() const noexcept { return num_nodes_; }
    [[nodiscard]] std::size_t num_edges() const noexcept { return edges_.size(); }
    [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
    [[nodiscard]] const Edge& edge(EdgeId alpha) const
    {
        if (alpha >= edges_.size())
            throw Error(ErrorCode::InvalidEdgeId, "edge " + std::to_string(alpha) + " of " +
                                                      std::to_string(edges_.size()));
        return edges_[alpha];
    }
    [[nodiscard]] const std::optional<std::vector<Point2>>& coords() const noexcept { return coords_; }

    [[nodiscard]] Eigen::VectorXd weights() const
    {
        Eigen::VectorXd w(static_cast<Eigen::Index>(edges_.size()));
        for (std::size_t a = 0; a < edges_.size(); ++a)
            w[static_cast<Eigen::Index>(a)] = edges_[a].w;
        return w;
    }

    [[nodiscard]] bool is_unweighted() const noexcept
    {
        return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.w == 1.0; });
    }

    /// Edge index of {i, j}, if present.
    [[nodiscard]] std::optional<EdgeId> find_edge(NodeId i, NodeId j) const
    {
        if (i > j)
            std::swap(i, j);
        auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{i, j},
                                   [](const Edge& e, const std::pair<NodeId, NodeId>& key) {
                                       return std::pair{e.i, e.j} < key;
                                   });
        if (it == edges_.end() || it->i != i || it->j != j)
            return std::nullopt;
        return static_cast<EdgeId>(it - edges_.begin());
    }

    /// Same topology, every weight replaced by 1.
    [[nodiscard]] Graph unweighted() const
    {
        Graph g = *this;
        for (auto& e : g.edges_)
            e.w = 1.0;
        return g;
    }

    /// Same topology with new edge weights (indexed by edge id). Weights must stay positive.
    [[nodiscard]] Graph with_weights(std::span<const double> w) const;

    /// Graph on the same node set keeping only the listed edges (edge ids of this graph).
    [[nodiscard]] Graph edge_subgraph(std::span<const EdgeId> kept) const;

    [[nodiscard]] Graph with_coords(std::vector<Point2> coords) const
    {
        if (coords.size() != num_nodes_)
            throw Error(ErrorCode::DimensionMismatch, "coordinate count differs from node count");
        Graph g = *this;
        g.coords_ = std::move(coords);
        return g;
    }

    friend bool operator==(const Graph& a, const Graph& b)
    {
        return a.num_nodes_ == b.num_nodes_ && a.edges_ == b.edges_;
    }

    friend Graph build_graph(std::size_t num_nodes, std::span<const Edge> edge_list);

private:
    std::size_t num_nodes_ = 0;
    std::vector<Edge> edges_;
    std::optional<std::vector<Point2>> coords_;
};

/**
 * Canonicalizes an edge list into a Graph.
 *
 * (j, i) is folded into (i, j). Repeated pairs with the same weight collapse to
 * one edge; repeated pairs with different weights raise DuplicateEdge.
 */
inline Graph build_graph(std::size_t num_nodes, std::span<const Edge> edge_list)
{
    std::vector<Edge> edges;
    edges.reserve(edge_list.size());
    for (const Edge& raw : edge_list) {
        if (raw.i >= num_nodes || raw.j >= num_nodes)
            throw Error(ErrorCode::NodeOutOfRange, "edge (" + std::to_string(raw.i) + ", " +
                                                       std::to_string(raw.j) + ") with N=" +
                                                       std::to_string(num_nodes));
        if (raw.i == raw.j)
            throw Error(ErrorCode::SelfLoop, "node " + std::to_string(raw.i));
        if (!(raw.w > 0.0) || !std::isfinite(raw.w))
            throw Error(ErrorCode::NonPositiveWeight, "edge (" + std::to_string(raw.i) + ", " +
                                                          std::to_string(raw.j) + ")");
        edges.push_back({std::min(raw.i, raw.j), std::max(raw.i, raw.j), raw.w});
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::pair{a.i, a.j} < std::pair{b.i, b.j};
    });
    std::vector<Edge> unique;
    unique.reserve(edges.size());
    for (const Edge& e : edges) {
        if (!unique.empty() && unique.back().i == e.i && unique.back().j == e.j) {
            if (unique.back().w != e.w)
                throw Error(ErrorCode::DuplicateEdge, "pair (" + std::to_string(e.i) + ", " +
                                                          std::to_string(e.j) +
                                                          ") listed with conflicting weights");
            continue;
        }
        unique.push_back(e);
    }
    Graph g;
    g.num_nodes_ = num_nodes;
    g.edges_ = std::move(unique);
    return g;
}

inline Graph build_graph(std::size_t num_nodes, std::initializer_list<Edge> edge_list)
{
    return build_graph(num_nodes, std::span<const Edge>(edge_list.begin(), edge_list.size()));
}

inline Graph Graph::with_weights(std::span<const double> w) const
{
    if (w.size() != edges_.size())
        throw Error(ErrorCode::DimensionMismatch, "weight vector length differs from edge count");
    std::vector<Edge> next = edges_;
    for (std::size_t a = 0; a < next.size(); ++a)
        next[a].w = w[a];
    Graph g = build_graph(num_nodes_, next);
    g.coords_ = coords_;
    return g;
}

inline Graph Graph::edge_subgraph(std::span<const EdgeId> kept) const
{
    std::vector<Edge> next;
    next.reserve(kept.size());
    for (EdgeId a : kept)
        next.push_back(edge(a));
    Graph g = build_graph(num_nodes_, next);
    g.coords_ = coords_;
    return g;
}

// ---------------------------------------------------------------------------
// Incidence matrices, degrees, Laplacian

enum class IncidenceKind {
    Unweighted, ///< B: ones at both endpoints
    Weighted,   ///< B~: sqrt(w) at both endpoints
    Oriented,   ///< B-bar: +sqrt(w) at i, -sqrt(w) at j (i < j)
};

struct IncidenceMatrix {
    IncidenceKind kind = IncidenceKind::Unweighted;
    SparseMatrix entries; ///< |V| x |E|, columns in edge-index order
};

inline IncidenceMatrix incidence(const Graph& g, IncidenceKind kind)
{
    std::vector<Triplet> triplets;
    triplets.reserve(2 * g.num_edges());
    for (std::size_t a = 0; a < g.num_edges(); ++a) {
        const Edge& e = g.edges()[a];
        const double s = kind == IncidenceKind::Unweighted ? 1.0 : std::sqrt(e.w);
        const double t = kind == IncidenceKind::Oriented ? -s : s;
        const auto col = static_cast<Eigen::Index>(a);
        triplets.emplace_back(static_cast<Eigen::Index>(e.i), col, s);
        triplets.emplace_back(static_cast<Eigen::Index>(e.j), col, t);
    }
    IncidenceMatrix out{kind, SparseMatrix(static_cast<Eigen::Index>(g.num_nodes()),
                                           static_cast<Eigen::Index>(g.num_edges()))};
    out.entries.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

struct DegreeVectors {
    Eigen::VectorXd weighted;   ///< d_m = sum_n w_mn
    Eigen::VectorXd sqrt_sum;   ///< sum_n sqrt(w_mn)
    Eigen::VectorXd unweighted; ///< k_m, number of incident edges
    Eigen::VectorXd oriented;   ///< signed row sums of the oriented incidence matrix
};

inline DegreeVectors degrees(const Graph& g)
{
    const auto n = static_cast<Eigen::Index>(g.num_nodes());
    DegreeVectors d{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n),
                    Eigen::VectorXd::Zero(n)};
    for (const Edge& e : g.edges()) {
        const auto i = static_cast<Eigen::Index>(e.i);
        const auto j = static_cast<Eigen::Index>(e.j);
        const double s = std::sqrt(e.w);
        d.weighted[i] += e.w;
        d.weighted[j] += e.w;
        d.sqrt_sum[i] += s;
        d.sqrt_sum[j] += s;
        d.unweighted[i] += 1.0;
        d.unweighted[j] += 1.0;
        d.oriented[i] += s;
        d.oriented[j] -= s;
    }
    return d;
}

/// Symmetric weighted adjacency matrix W.
inline SparseMatrix adjacency(const Graph& g)
{
    std::vector<Triplet> triplets;
    triplets.reserve(2 * g.num_edges());
    for (const Edge& e : g.edges()) {
        triplets.emplace_back(static_cast<Eigen::Index>(e.i), static_cast<Eigen::Index>(e.j), e.w);
        triplets.emplace_back(static_cast<Eigen::Index>(e.j), static_cast<Eigen::Index>(e.i), e.w);
    }
    const auto n = static_cast<Eigen::Index>(g.num_nodes());
    SparseMatrix w(n, n);
    w.setFromTriplets(triplets.begin(), triplets.end());
    return w;
}

/// L = D - W.
inline SparseMatrix laplacian(const Graph& g)
{
    std::vector<Triplet> triplets;
    triplets.reserve(4 * g.num_edges());
    for (const Edge& e : g.edges()) {
        const auto i = static_cast<Eigen::Index>(e.i);
        const auto j = static_cast<Eigen::Index>(e.j);
        triplets.emplace_back(i, i, e.w);
        triplets.emplace_back(j, j, e.w);
        triplets.emplace_back(i, j, -e.w);
        triplets.emplace_back(j, i, -e.w);
    }
    const auto n = static_cast<Eigen::Index>(g.num_nodes());
    SparseMatrix l(n, n);
    l.setFromTriplets(triplets.begin(), triplets.end());
    return l;
}

/// Per-node neighbor lists as (neighbor, edge id), ascending by neighbor.
inline std::vector<std::vector<std::pair<NodeId, EdgeId>>> incident_edges(const Graph& g)
{
    std::vector<std::vector<std::pair<NodeId, EdgeId>>> adj(g.num_nodes());
    for (std::size_t a = 0; a < g.num_edges(); ++a) {
        const Edge& e = g.edges()[a];
        adj[e.i].emplace_back(e.j, a);
        adj[e.j].emplace_back(e.i, a);
    }
    for (auto& list : adj)
        std::sort(list.begin(), list.end());
    return adj;
}

/// Component label per node (labels are 0..count-1 in order of first appearance).
struct Components {
    std::vector<std::size_t> label;
    std::size_t count = 0;
};

inline Components connected_components(const Graph& g)
{
    const auto adj = incident_edges(g);
    constexpr auto unset = static_cast<std::size_t>(-1);
    Components c{std::vector<std::size_t>(g.num_nodes(), unset), 0};
    std::vector<NodeId> stack;
    for (NodeId s = 0; s < g.num_nodes(); ++s) {
        if (c.label[s] != unset)
            continue;
        c.label[s] = c.count;
        stack.push_back(s);
        while (!stack.empty()) {
            const NodeId u = stack.back();
            stack.pop_back();
            for (const auto& [v, a] : adj[u]) {
                if (c.label[v] == unset) {
                    c.label[v] = c.count;
                    stack.push_back(v);
                }
            }
        }
        ++c.count;
    }
    return c;
}

/**
 * Squared weight differences of adjacent edges: ([W]_ij - [W]_ik)^2 for every
 * node i and every unordered pair of neighbors j < k. The distribution of these
 * values measures how smooth the edge weights are.
 */
inline std::vector<double> adjacent_weight_diffs(const Graph& g)
{
    std::vector<double> out;
    for (const auto& list : incident_edges(g)) {
        for (std::size_t p = 0; p < list.size(); ++p) {
            for (std::size_t q = p + 1; q < list.size(); ++q) {
                const double d = g.edges()[list[p].second].w - g.edges()[list[q].second].w;
                out.push_back(d * d);
            }
        }
    }
    return out;
}

} // namespace edgesample
