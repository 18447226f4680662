#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "muxdyn/coupling.hpp"
#include "muxdyn/error.hpp"
#include "muxdyn/manifest.hpp"
#include "support.hpp"

using namespace muxdyn;

namespace {

// M as a sum of rank-one pieces: for every copy (l, j), column (l, j) is
// alpha(l, j) * sum_i c(i, l, j) e_{(i, j)}.
Matrix redistribution_oracle(const CouplingScheme& s) {
    const auto n = s.n(), k = s.k();
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n * k), static_cast<Eigen::Index>(n * k));
    for (std::size_t l = 0; l < k; ++l)
        for (std::size_t j = 0; j < n; ++j) {
            Vector col = Vector::Zero(m.rows());
            for (std::size_t i = 0; i < k; ++i) col(static_cast<Eigen::Index>(i * n + j)) = s.c(i, l, j);
            Vector unit = Vector::Zero(m.rows());
            unit(static_cast<Eigen::Index>(l * n + j)) = 1.0;
            m += s.alpha(l, j) * col * unit.transpose();
        }
    return m;
}

CouplingScheme random_scheme(std::mt19937_64& rng, std::size_t n, std::size_t k, bool closed) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<double> c(k * k * n);
    for (std::size_t l = 0; l < k; ++l)
        for (std::size_t j = 0; j < n; ++j) {
            double sum = 0;
            for (std::size_t i = 0; i < k; ++i) sum += c[(i * k + l) * n + j] = u(rng);
            for (std::size_t i = 0; i < k; ++i) c[(i * k + l) * n + j] /= sum;
        }
    Matrix alpha = Matrix::Ones(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n));
    if (!closed) alpha = alpha.unaryExpr([&](double) { return u(rng); });
    return {n, k, std::move(c), alpha};
}

}  // namespace

TEST(Coupling, EquidistributionOnToy) {
    const auto s = scheme_equidistribution(test::toy());
    EXPECT_TRUE(s.is_closed());
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t l = 0; l < 2; ++l)
            for (std::size_t j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(s.c(i, l, j), 0.5);
    const Matrix m = build_redistribution(s).to_dense();
    // (1/k) J_k (x) I_n is an orthogonal projection of rank n
    EXPECT_TRUE((m * m).isApprox(m));
    EXPECT_TRUE(m.isApprox(m.transpose()));
    EXPECT_NEAR(m.trace(), 3.0, 1e-12);
}

TEST(Coupling, InvariantsEnforced) {
    EXPECT_THROW(CouplingScheme(1, 2, {0.5, 0.5, 0.5, 0.6}, Matrix::Ones(2, 1)), InputError);
    EXPECT_THROW(CouplingScheme(1, 2, {1.5, 0.0, -0.5, 1.0}, Matrix::Ones(2, 1)), InputError);
    EXPECT_THROW(CouplingScheme(1, 2, {1.0, 0.0, 0.0}, Matrix::Ones(2, 1)), InputError);
    EXPECT_THROW(CouplingScheme(1, 2, {1.0, 0.0, 0.0, 1.0}, Matrix::Ones(1, 1)), InputError);
    Matrix neg_alpha = Matrix::Ones(2, 1);
    neg_alpha(1, 0) = -0.1;
    EXPECT_THROW(CouplingScheme(1, 2, {1.0, 0.0, 0.0, 1.0}, neg_alpha), InputError);
    EXPECT_NO_THROW(CouplingScheme(1, 2, {0.25, 1.0, 0.75, 0.0}, Matrix::Ones(2, 1)));
}

TEST(Coupling, HierarchicalNormalizesColumns) {
    const auto m = test::toy();
    Matrix raw(2, 2);
    raw << 1, 2, 3, 2;
    const auto s = scheme_hierarchical(m, raw);
    EXPECT_DOUBLE_EQ(s.c(0, 0, 1), 0.25);
    EXPECT_DOUBLE_EQ(s.c(1, 0, 1), 0.75);
    EXPECT_DOUBLE_EQ(s.c(0, 1, 2), 0.5);
    raw.col(1).setZero();
    EXPECT_THROW(scheme_hierarchical(m, raw), InputError);
}

TEST(Coupling, HierarchyHeuristicsOnToy) {
    const auto m = test::toy();
    const auto d = scheme_hierarchical(m, HierarchyHeuristic::density);
    // densities 2/3 and 1
    EXPECT_NEAR(d.c(0, 1, 0), 0.4, 1e-15);
    EXPECT_NEAR(d.c(1, 0, 0), 0.6, 1e-15);
    // 2 and 3 edges
    for (auto h : {HierarchyHeuristic::edge_ratio, HierarchyHeuristic::global_proportion}) {
        const auto s = scheme_hierarchical(m, h);
        EXPECT_NEAR(s.c(0, 0, 2), 0.4, 1e-15);
        EXPECT_NEAR(s.c(1, 1, 2), 0.6, 1e-15);
    }
    EXPECT_EQ(parse_heuristic("edge_ratio"), HierarchyHeuristic::edge_ratio);
    EXPECT_THROW(parse_heuristic("nope"), InputError);
}

TEST(Coupling, UnifiedNodeAndIdentity) {
    const auto m = test::toy();
    Matrix share(2, 3);
    share << 0.2, 0.5, 1.0, 0.8, 0.5, 0.0;
    Matrix alpha = Matrix::Ones(2, 3);
    alpha(1, 2) = 0.5;
    const auto s = scheme_unified_node(m, alpha, share);
    EXPECT_FALSE(s.is_closed());
    EXPECT_DOUBLE_EQ(s.c(1, 0, 0), 0.8);
    EXPECT_DOUBLE_EQ(s.c(1, 1, 0), 0.8);
    EXPECT_DOUBLE_EQ(s.alpha(1, 2), 0.5);
    share(0, 0) = 0.3;
    EXPECT_THROW(scheme_unified_node(m, alpha, share), InputError);

    const auto id = scheme_identity(m);
    EXPECT_TRUE(build_redistribution(id).to_dense().isIdentity());
}

TEST(Coupling, RedistributionMatchesRankOneOracle) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 2 + trial % 5, k = 1 + trial % 4;
        const auto s = random_scheme(rng, n, k, trial % 2 == 0);
        const auto m = build_redistribution(s);
        EXPECT_TRUE(m.to_dense().isApprox(redistribution_oracle(s), 1e-15));
        EXPECT_EQ(m.closed(), s.is_closed());
        // sparse storage agrees with dense
        EXPECT_TRUE(build_redistribution(s, 0).to_dense().isApprox(m.to_dense()));
        // column sums equal alpha
        const Vector sums = m.column_sums();
        for (std::size_t l = 0; l < k; ++l)
            for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(sums(static_cast<Eigen::Index>(l * n + j)), s.alpha(l, j), 1e-12);
    }
}

TEST(Coupling, ContractionWithUniformAlpha) {
    std::mt19937_64 rng(3);
    const auto closed = random_scheme(rng, 4, 3, true);
    std::vector<double> c(3 * 3 * 4);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t l = 0; l < 3; ++l)
            for (std::size_t j = 0; j < 4; ++j) c[(i * 3 + l) * 4 + j] = closed.c(i, l, j);
    const CouplingScheme open(4, 3, c, Matrix::Constant(3, 4, 0.7));
    const auto m = build_redistribution(open);
    const Vector x = Vector::LinSpaced(12, 0.1, 2.0);
    EXPECT_NEAR(m.apply(x).sum(), 0.7 * x.sum(), 1e-12);
}

TEST(LayerDynamics, WalkIsColumnStochastic) {
    const auto m = test::toy();
    const auto d = layer_dynamics(m, DynamicsKind::random_walk);
    EXPECT_EQ(d.dynamics(), DynamicsKind::random_walk);
    EXPECT_TRUE((d.column_sums().array() - 1.0).abs().maxCoeff() < 1e-15);
    EXPECT_DOUBLE_EQ(d.coeff(0, 1), 0.5);  // A: 2 -> 1, node 2 has degree 2
    EXPECT_DOUBLE_EQ(d.coeff(1, 0), 1.0);  // A: 1 -> 2
}

TEST(LayerDynamics, IsolatedNodeGetsSelfLoop) {
    const std::vector<Edge> e{{0, 1, 1.0}};
    const Multiplex m({LayerGraph::from_edges("L", 3, false, e)});
    const Matrix d = layer_dynamics(m, DynamicsKind::random_walk).to_dense();
    EXPECT_TRUE(d.col(2).isApprox(Vector::Unit(3, 2)));
}

TEST(LayerDynamics, WeightedWalkAndLaplacian) {
    const std::vector<Edge> e{{0, 1, 2.0}, {0, 2, 6.0}};
    const Multiplex m({LayerGraph::from_edges("L", 3, true, e)});
    const auto walk = layer_dynamics(m, DynamicsKind::random_walk);
    EXPECT_DOUBLE_EQ(walk.coeff(1, 0), 0.25);
    EXPECT_DOUBLE_EQ(walk.coeff(2, 0), 0.75);
    EXPECT_THROW(layer_dynamics(m, DynamicsKind::laplacian), InputError);

    const Matrix lap = layer_dynamics(test::toy(), DynamicsKind::laplacian).to_dense();
    EXPECT_LT(lap.colwise().sum().cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_DOUBLE_EQ(lap(1, 1), 2.0);
    EXPECT_DOUBLE_EQ(lap(4, 4), 2.0);
    EXPECT_DOUBLE_EQ(lap(0, 1), -1.0);
}

TEST(Operator, BlocksAreCouplingTimesDynamics) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const auto m = test::random_multiplex_small(rng, 5, 3, 0.4, trial % 2 == 0, true);
        const auto s = random_scheme(rng, 5, 3, trial % 3 != 0);
        for (auto kind : {DynamicsKind::adjacency, DynamicsKind::random_walk}) {
            const auto op = make_operator(m, s, kind);
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t l = 0; l < 3; ++l) {
                    Matrix c = Matrix::Zero(5, 5);
                    for (std::size_t j = 0; j < 5; ++j) c(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = s.alpha(l, j) * s.c(i, l, j);
                    EXPECT_LT((op.op.block(i, l) - c * op.dynamics.block(l, l)).cwiseAbs().maxCoeff(), 1e-14);
                }
        }
    }
}

TEST(Operator, ClosedWalkOnKrackhardtIsStochastic) {
    const auto m = load_multiplex(test::data_path("krackhardt.json"));
    for (const auto& s : {scheme_equidistribution(m), scheme_hierarchical(m, HierarchyHeuristic::density)}) {
        const auto op = make_operator(m, s, DynamicsKind::random_walk);
        EXPECT_TRUE(op.op.nonnegative());
        EXPECT_LT((op.op.column_sums().array() - 1.0).abs().maxCoeff(), 1e-12);
        EXPECT_EQ(op.op.closed(), true);
    }
}

TEST(Operator, DimensionChecks) {
    const auto m = test::toy();
    const auto other = Multiplex({LayerGraph("x", false, Matrix::Zero(2, 2))});
    EXPECT_THROW(make_operator(m, scheme_equidistribution(other), DynamicsKind::adjacency), InputError);
    const auto d = layer_dynamics(m, DynamicsKind::adjacency);
    EXPECT_THROW(build_operator(d, d), InputError);
}

TEST(Transition, ToyProbabilities) {
    const auto m = test::toy();
    const auto op = make_operator(m, scheme_equidistribution(m), DynamicsKind::random_walk);
    // from (A, node 2): degree 2 in A, half the mass changes layer
    EXPECT_DOUBLE_EQ(transition_probability(op, {0, 1}, {1, 0}), 0.25);
    EXPECT_DOUBLE_EQ(transition_probability(op, {0, 1}, {0, 2}), 0.25);
    EXPECT_DOUBLE_EQ(transition_probability(op, {0, 0}, {1, 1}), 0.5);
    EXPECT_DOUBLE_EQ(transition_probability(op, {0, 0}, {1, 2}), 0.0);
    double total = 0;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) total += transition_probability(op, {1, 2}, {i, j});
    EXPECT_NEAR(total, 1.0, 1e-15);

    const auto adj = make_operator(m, scheme_equidistribution(m), DynamicsKind::adjacency);
    EXPECT_THROW(transition_probability(adj, {0, 0}, {0, 1}), InputError);
    EXPECT_THROW(transition_probability(op, {2, 0}, {0, 1}), InputError);
}

TEST(Transition, SingleLayerIsMonoplexWalk) {
    std::mt19937_64 rng(4);
    const auto m = test::random_multiplex_small(rng, 6, 1, 0.5, true, false);
    const auto op = make_operator(m, scheme_equidistribution(m), DynamicsKind::random_walk);
    for (std::size_t a = 0; a < 6; ++a) {
        const double out = m.layer(0).out_weight(a);
        for (std::size_t b = 0; b < 6; ++b) {
            const double expected = out == 0.0 ? (a == b ? 1.0 : 0.0) : (m.layer(0).has_arc(a, b) ? 1.0 / out : 0.0);
            EXPECT_DOUBLE_EQ(transition_probability(op, {0, a}, {0, b}), expected);
        }
    }
}

TEST(CouplingConfig, JsonModes) {
    const auto m = test::toy();
    using nlohmann::json;
    EXPECT_TRUE(scheme_from_json(m, json{{"mode", "equidistribution"}}).is_closed());
    const auto open = scheme_from_json(m, json{{"mode", "identity"}, {"alpha", {{1, 1, 0.5}, {1, 1, 1}}}});
    EXPECT_FALSE(open.is_closed());
    EXPECT_DOUBLE_EQ(open.c(0, 0, 1), 1.0);

    const auto h = scheme_from_json(m, json{{"mode", "hierarchical"}, {"c", {{1, 1}, {3, 3}}}});
    EXPECT_DOUBLE_EQ(h.c(1, 0, 0), 0.75);

    const auto e = scheme_from_json(
        m, json{{"mode", "explicit"}, {"c", {{{1, 0}, {0, 1}}, {{0.5, 0.5}, {0.5, 0.5}}, {{0, 1}, {1, 0}}}}});
    EXPECT_DOUBLE_EQ(e.c(0, 0, 0), 1.0);
    EXPECT_DOUBLE_EQ(e.c(0, 1, 1), 0.5);
    EXPECT_DOUBLE_EQ(e.c(1, 0, 2), 1.0);

    EXPECT_THROW(scheme_from_json(m, json{{"mode", "explicit"}, {"c", {{1, 1}, {1, 1}}}}), InputError);
    EXPECT_THROW(scheme_from_json(m, json{{"mode", "bogus"}}), InputError);
    EXPECT_THROW(scheme_from_json(m, json{{"heuristic", "density"}}), InputError);
}

TEST(CouplingConfig, SpecPresetsAndFiles) {
    const auto m = test::toy();
    EXPECT_TRUE(scheme_from_spec(m, "identity").is_closed());
    EXPECT_NEAR(scheme_from_spec(m, "hierarchical:density").c(1, 1, 0), 0.6, 1e-15);
    EXPECT_THROW(scheme_from_spec(m, "no-such-preset"), InputError);

    const auto path = std::filesystem::temp_directory_path() / "muxdyn_coupling_test.json";
    {
        std::ofstream f(path);
        f << R"({"mode": "hierarchical", "heuristic": "global_proportion"})";
    }
    EXPECT_NEAR(scheme_from_spec(m, path.string()).c(0, 1, 2), 0.4, 1e-15);
    std::filesystem::remove(path);
}
