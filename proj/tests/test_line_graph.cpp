#include "support.hpp"

using namespace edgesample;
using testing_support::error_code_of;

namespace {

Graph star_4_9() { return build_graph(3, {{0, 1, 4.0}, {0, 2, 9.0}}); }
Graph triangle() { return build_graph(3, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}}); }
Graph path3() { return build_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}}); }

} // namespace

TEST(LineGraph, PathHasOneLineEdge)
{
    const LineGraph lg = line_graph(path3());
    const Eigen::MatrixXd w(lg.adjacency);
    ASSERT_EQ(w.rows(), 2);
    EXPECT_EQ(w(0, 1), 1.0);
    EXPECT_EQ(w(1, 0), 1.0);
    EXPECT_EQ(w.diagonal().cwiseAbs().sum(), 0.0);
    EXPECT_EQ(lg.num_line_edges, 1u);
}

TEST(LineGraph, TriangleIsTriangle)
{
    const Eigen::MatrixXd w(line_graph(triangle()).adjacency);
    Eigen::Matrix3d expected;
    expected << 0, 1, 1, 1, 0, 1, 1, 1, 0;
    EXPECT_EQ(w, Eigen::MatrixXd(expected));
}

TEST(LineGraph, StarWeightIsProductOfRoots)
{
    const Eigen::MatrixXd w(line_graph(star_4_9()).adjacency);
    EXPECT_DOUBLE_EQ(w(0, 1), 6.0);
}

TEST(LineGraph, MatchesDefinitionOnRandomGraphs)
{
    Rng rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        const Graph g = testing_support::random_graph(3, 30, rng, trial % 2 == 0, trial);
        const LineGraph lg = line_graph(g);
        const Eigen::MatrixXd w(lg.adjacency);
        const Eigen::MatrixXd oracle = testing_support::line_adjacency_oracle(g);
        EXPECT_LE((w - oracle).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_EQ(w.diagonal().cwiseAbs().maxCoeff(), 0.0);
        if (g.is_unweighted()) {
            EXPECT_TRUE((w.array() == 0.0 || w.array() == 1.0).all());
        }
        const Eigen::MatrixXd l(lg.laplacian);
        const Eigen::VectorXd deg = w.rowwise().sum();
        EXPECT_LE((l - (Eigen::MatrixXd(deg.asDiagonal()) - w)).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_EQ(lg.edge_map.size(), g.num_edges());
    }
}

TEST(LineGraph, EmptyEdgeSetIsRejected)
{
    const Graph g = build_graph(3, {});
    EXPECT_EQ(error_code_of([&] { (void)line_graph(g); }), ErrorCode::EmptyEdgeSet);
    EXPECT_EQ(error_code_of([&] { (void)edge_laplacian(g); }), ErrorCode::EmptyEdgeSet);
}

TEST(EdgeLaplacian, Path)
{
    const Eigen::MatrixXd le(edge_laplacian(path3()).matrix);
    Eigen::Matrix2d expected;
    expected << 2, -1, -1, 2;
    EXPECT_EQ(le, Eigen::MatrixXd(expected));
}

TEST(EdgeLaplacian, SingleEdge)
{
    const Eigen::MatrixXd le(edge_laplacian(build_graph(2, {{0, 1, 2.5}})).matrix);
    ASSERT_EQ(le.rows(), 1);
    EXPECT_DOUBLE_EQ(le(0, 0), 5.0);
}

TEST(EdgeLaplacian, TreesHaveNoZeroEigenvalue)
{
    Rng rng(5);
    for (int trial = 0; trial < 15; ++trial) {
        const Graph g = testing_support::random_tree(2 + rng.below(20), rng, true);
        const Spectrum s = eig_sym(edge_laplacian(g).matrix);
        EXPECT_GT(s.eigenvalues.minCoeff(), 1e-10);
    }
}

TEST(EdgeLaplacian, PositiveSemidefiniteAndFactored)
{
    Rng rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const Graph g = testing_support::random_graph(3, 25, rng, true, trial);
        const Eigen::MatrixXd b = testing_support::oriented_incidence_oracle(g);
        const Eigen::MatrixXd le(edge_laplacian(g).matrix);
        EXPECT_LE((le - b.transpose() * b).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_GE(eig_sym(le).eigenvalues.minCoeff(), -1e-9);
    }
}

TEST(ClosedFormDegree, Triangle)
{
    const Graph g = triangle();
    const Eigen::VectorXd sums = row_sums(line_graph(g).adjacency);
    for (EdgeId a = 0; a < 3; ++a) {
        EXPECT_EQ(line_degree_closed_form(g, a, DegreeMode::Unweighted), 2.0);
        EXPECT_EQ(sums[static_cast<Eigen::Index>(a)], 2.0);
    }
}

TEST(ClosedFormDegree, LoneEdgeIsZero)
{
    const Graph g = build_graph(2, {{0, 1, 7.0}});
    EXPECT_NEAR(line_degree_closed_form(g, 0, DegreeMode::Weighted), 0.0, 1e-12);
}

TEST(ClosedFormDegree, WeightedStar)
{
    const Graph g = star_4_9();
    EXPECT_DOUBLE_EQ(line_degree_closed_form(g, 0, DegreeMode::Weighted), 6.0);
    EXPECT_DOUBLE_EQ(row_sums(line_graph(g).adjacency)[0], 6.0);
}

TEST(ClosedFormDegree, OrientedPath)
{
    // d-bar = B-bar 1 = (1, 0, -1): edge 0 gives 1 - 0, edge 1 gives 0 - (-1).
    const Graph g = path3();
    EXPECT_DOUBLE_EQ(line_degree_closed_form(g, 0, DegreeMode::Oriented), 1.0);
    EXPECT_DOUBLE_EQ(line_degree_closed_form(g, 1, DegreeMode::Oriented), 1.0);
    const Eigen::VectorXd sums = row_sums(edge_laplacian(g).matrix);
    EXPECT_DOUBLE_EQ(sums[0], 1.0);
    EXPECT_DOUBLE_EQ(sums[1], 1.0);
}

TEST(ClosedFormDegree, RandomGraphsAgreeWithDefinition)
{
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const Graph g = testing_support::random_graph(3, 50, rng, trial % 3 != 0, trial);
        const Eigen::MatrixXd oracle = testing_support::line_adjacency_oracle(g);
        const Eigen::MatrixXd oracle_u = testing_support::line_adjacency_oracle(g.unweighted());
        for (EdgeId a = 0; a < g.num_edges(); ++a) {
            const auto i = static_cast<Eigen::Index>(a);
            EXPECT_EQ(line_degree_closed_form(g, a, DegreeMode::Unweighted), oracle_u.row(i).sum());
            const double sum = oracle.row(i).sum();
            EXPECT_LE(std::abs(line_degree_closed_form(g, a, DegreeMode::Weighted) - sum),
                      1e-9 * std::max(1.0, std::abs(sum)));
        }
        const LineDegreeReport r = verify_line_degrees(g);
        EXPECT_EQ(r.max_abs_unweighted, 0.0);
        EXPECT_LE(r.max_rel_weighted, 1e-9);
        EXPECT_LE(r.max_abs_oriented, 1e-9);
    }
}
