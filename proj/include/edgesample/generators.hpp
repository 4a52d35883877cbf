#pragma once

#include "edgesample/graph.hpp"
#include "edgesample/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

namespace edgesample {

/// A generated graph plus the planted cluster labels, when the family has them.
struct GeneratedGraph {
    Graph graph;
    std::optional<std::vector<std::size_t>> labels;
};

/// Sensor-style weight exp(-||p_i - p_j|| / 0.3).
inline double distance_weight(const Point2& a, const Point2& b, double length_scale = 0.3)
{
    return std::exp(-std::hypot(a.x - b.x, a.y - b.y) / length_scale);
}

/**
 * Union-symmetrized kNN graph over points: {i, j} is an edge when either lists
 * the other among its `neighbors` nearest points. Distance ties go to the lower id.
 */
inline Graph knn_graph(const std::vector<Point2>& pts, std::size_t neighbors, double length_scale = 0.3)
{
    const std::size_t n = pts.size();
    std::vector<Edge> edges;
    std::vector<std::pair<double, NodeId>> dist;
    for (NodeId i = 0; i < n; ++i) {
        dist.clear();
        for (NodeId j = 0; j < n; ++j)
            if (j != i)
                dist.emplace_back(std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y), j);
        const std::size_t take = std::min(neighbors, dist.size());
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(take), dist.end());
        for (std::size_t r = 0; r < take; ++r)
            edges.push_back({i, dist[r].second, distance_weight(pts[i], pts[dist[r].second], length_scale)});
    }
    // Both directions carry the identical weight, so build_graph merges them.
    return build_graph(n, edges).with_coords(pts);
}

inline std::vector<Point2> uniform_points(std::size_t n, Rng& rng)
{
    std::vector<Point2> pts(n);
    for (auto& p : pts) {
        p.x = rng.uniform();
        p.y = rng.uniform();
    }
    return pts;
}

/// Random sensor network: uniform points in the unit square, kNN, distance weights.
inline GeneratedGraph gen_sensor(std::size_t num_nodes, std::size_t k, std::uint64_t seed)
{
    if (num_nodes < 2 || k < 1 || k >= num_nodes)
        throw Error(ErrorCode::InvalidArgument, "sensor graph needs N >= 2 and 1 <= k < N");
    Rng rng(seed);
    return {knn_graph(uniform_points(num_nodes, rng), k), std::nullopt};
}

struct ErdosRenyiParams {
    bool weighted = false; ///< weights ~ U(0.5, 1.5) instead of 1
};

inline GeneratedGraph gen_erdos_renyi(std::size_t num_nodes, double p, std::uint64_t seed,
                                      const ErdosRenyiParams& params = {})
{
    if (num_nodes < 2 || p < 0.0 || p > 1.0)
        throw Error(ErrorCode::InvalidArgument, "Erdos-Renyi graph needs N >= 2 and p in [0, 1]");
    Rng rng(seed);
    std::vector<Edge> edges;
    for (NodeId i = 0; i < num_nodes; ++i)
        for (NodeId j = i + 1; j < num_nodes; ++j)
            if (rng.bernoulli(p)) {
                const double w = params.weighted ? rng.uniform(0.5, 1.5) : 1.0;
                edges.push_back({i, j, w});
            }
    return {build_graph(num_nodes, edges), std::nullopt};
}

struct CommunityParams {
    double p_in = 0.7;
    double p_out = 0.01;
    double center_radius = 0.35; ///< community centers on a circle around (0.5, 0.5)
    double spread = 0.08;        ///< std-dev of members around their center
    double length_scale = 0.3;
};

/**
 * Planted-partition community graph. Nodes are split into near-equal
 * contiguous blocks; pairs connect with p_in inside a block and p_out across.
 * Weights are distance weights of planted 2D coordinates. Disconnected pieces
 * are joined to the component of node 0 through their closest node pair.
 */
inline GeneratedGraph gen_community(std::size_t num_nodes, std::size_t communities, std::uint64_t seed,
                                    const CommunityParams& params = {})
{
    if (num_nodes < 2 || communities < 1 || communities > num_nodes)
        throw Error(ErrorCode::InvalidArgument, "community graph needs N >= 2 and 1 <= c <= N");
    Rng rng(seed);
    std::vector<std::size_t> label(num_nodes);
    for (NodeId i = 0; i < num_nodes; ++i)
        label[i] = i * communities / num_nodes;
    std::vector<Point2> centers(communities);
    for (std::size_t c = 0; c < communities; ++c) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(communities);
        const double r = communities == 1 ? 0.0 : params.center_radius;
        centers[c] = {0.5 + r * std::cos(angle), 0.5 + r * std::sin(angle)};
    }
    std::vector<Point2> pts(num_nodes);
    for (NodeId i = 0; i < num_nodes; ++i)
        pts[i] = {rng.normal(centers[label[i]].x, params.spread), rng.normal(centers[label[i]].y, params.spread)};

    std::vector<Edge> edges;
    for (NodeId i = 0; i < num_nodes; ++i)
        for (NodeId j = i + 1; j < num_nodes; ++j)
            if (rng.bernoulli(label[i] == label[j] ? params.p_in : params.p_out))
                edges.push_back({i, j, distance_weight(pts[i], pts[j], params.length_scale)});

    Graph g = build_graph(num_nodes, edges);
    Components comp = connected_components(g);
    while (comp.count > 1) {
        // Link the first piece not containing node 0 to node 0's component.
        std::size_t other = comp.label[0] == 0 ? 1 : 0;
        double best = std::numeric_limits<double>::infinity();
        NodeId bi = 0;
        NodeId bj = 0;
        for (NodeId i = 0; i < num_nodes; ++i) {
            if (comp.label[i] != comp.label[0])
                continue;
            for (NodeId j = 0; j < num_nodes; ++j) {
                if (comp.label[j] != other)
                    continue;
                const double d = std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        edges.push_back({bi, bj, distance_weight(pts[bi], pts[bj], params.length_scale)});
        g = build_graph(num_nodes, edges);
        comp = connected_components(g);
    }
    return {g.with_coords(std::move(pts)), std::move(label)};
}

struct KnnClusterParams {
    double separation = 0.4; ///< distance between neighboring cluster centers
    double spread = 0.1;     ///< std-dev of each Gaussian blob
    /// Count the query point as its own first neighbor, so each point links to k - 1 others.
    bool include_self = true;
    double length_scale = 0.3;
};

/**
 * kNN graph of a point cloud made of Gaussian blobs with centers evenly spaced
 * on a horizontal line through (0.5, 0.5). With a single cluster the points are
 * drawn exactly as in gen_sensor.
 */
inline GeneratedGraph gen_knn_clusters(std::size_t num_nodes, std::size_t k, std::size_t clusters, std::uint64_t seed,
                                       const KnnClusterParams& params = {})
{
    if (num_nodes < 2 || k < 1 || k >= num_nodes || clusters < 1 || clusters > num_nodes)
        throw Error(ErrorCode::InvalidArgument, "kNN cluster graph needs N >= 2, 1 <= k < N, 1 <= clusters <= N");
    const std::size_t neighbors = params.include_self ? std::max<std::size_t>(1, k - 1) : k;
    Rng rng(seed);
    std::vector<std::size_t> label(num_nodes);
    for (NodeId i = 0; i < num_nodes; ++i)
        label[i] = i * clusters / num_nodes;
    if (clusters == 1)
        return {knn_graph(uniform_points(num_nodes, rng), neighbors, params.length_scale), std::move(label)};
    std::vector<Point2> pts(num_nodes);
    const double width = params.separation * static_cast<double>(clusters - 1);
    for (NodeId i = 0; i < num_nodes; ++i) {
        const double cx = 0.5 - width / 2.0 + params.separation * static_cast<double>(label[i]);
        pts[i] = {rng.normal(cx, params.spread), rng.normal(0.5, params.spread)};
    }
    return {knn_graph(pts, neighbors, params.length_scale), std::move(label)};
}

} // namespace edgesample
