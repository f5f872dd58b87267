#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

using namespace postvrp;
using namespace testing_support;

namespace {

StreetGraph single_edge(double w) {
    StreetGraph g;
    g.vertices = {{0, 0}, {w, 0}};
    g.edges = {{0, 1, 0, 0, w}};
    return g;
}

DeliverySet deliveries(std::initializer_list<DeliveryLocation> list) { return {std::vector<DeliveryLocation>(list)}; }

}

TEST(Metric, DijkstraOnPath) {
    StreetGraph g;
    g.vertices = {{0, 0}, {2, 0}, {5, 0}};
    g.edges = {{0, 1, 0, 0, 2}, {1, 2, 0, 0, 3}};
    EXPECT_EQ(dijkstra(g, 0), (std::vector<double>{0, 2, 5}));
}

TEST(Metric, DijkstraUnreachable) {
    StreetGraph g;
    g.vertices = {{0, 0}, {1, 0}, {9, 9}};
    g.edges = {{0, 1, 0, 0, 1}};
    EXPECT_EQ(dijkstra(g, 0)[2], unreachable);
}

TEST(Metric, DijkstraMatchesFloydWarshall) {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        auto g = random_graph(rng, 2 + rng.next_u64() % 39, rng.next_u64() % 60, 3, true);
        auto fw = floyd_warshall(g);
        Adjacency adj(g);
        for (std::size_t s = 0; s < g.vertices.size(); ++s)
            ASSERT_EQ(dijkstra(adj, s), fw[s]);
    }
}

TEST(Metric, CrossCost) {
    StreetGraph g;
    g.vertices = {{0, 0}, {1, 0}, {2, 0}};
    g.edges = {{0, 1, 0, 0, 1}, {1, 2, 0, 0, 1}, {0, 2, 1, 0, 2}};
    std::vector<double> widths{10, 20};
    EXPECT_EQ(cross_cost({0, 0.5, Side::plus}, {1, 0.5, Side::minus}, g, widths), 10);
    EXPECT_EQ(cross_cost({0, 0.5, Side::plus}, {1, 0.5, Side::plus}, g, widths), 0);
    EXPECT_EQ(cross_cost({0, 0.5, Side::plus}, {2, 0.5, Side::minus}, g, widths), 0);
}

TEST(Metric, SameEdgeWeights) {
    auto g = single_edge(100);
    DistanceOracle same(g, deliveries({{0, 0.2, Side::plus}, {0, 0.7, Side::plus}}), {10}, 5);
    EXPECT_DOUBLE_EQ(same(0, 1), 55);
    DistanceOracle opposite(g, deliveries({{0, 0.2, Side::plus}, {0, 0.7, Side::minus}}), {10}, 5);
    EXPECT_DOUBLE_EQ(opposite(0, 1), 65);
    EXPECT_EQ(opposite(1, 1), 0);
}

TEST(Metric, EdgesSharingAVertex) {
    StreetGraph g;
    g.vertices = {{0, 0}, {100, 0}, {200, 0}};
    g.edges = {{0, 1, 0, 0, 100}, {1, 2, 1, 0, 100}};
    // a is 30 from vertex 1 (its v end), b is 40 from vertex 1 (its u end).
    DeliveryLocation a{0, 0.3, Side::plus};
    DeliveryLocation b{1, 0.6, Side::minus};
    DistanceOracle o(g, deliveries({a, b}), {7, 9}, 0);
    EXPECT_NEAR(o(0, 1), 70, 1e-12);
    EXPECT_NEAR(augmented_weight(g, a, b, {7, 9}, 0), 70, 1e-12);
}

TEST(Metric, MatchesAugmentedGraph) {
    SplitMix64 rng(2025);
    for (int trial = 0; trial < 25; ++trial) {
        auto g = random_graph(rng, 2 + rng.next_u64() % 30, rng.next_u64() % 40, 2, false);
        std::vector<double> widths{rng.next_unit() * 20, rng.next_unit() * 20};
        double beta = rng.next_unit() * 10;
        DeliverySet set;
        for (int i = 0; i < 12; ++i)
            set.deliveries.push_back({static_cast<std::size_t>(rng.next_u64() % g.edges.size()), rng.next_unit(),
                                      rng.next_unit() < 0.5 ? Side::plus : Side::minus});
        // Force a few same-edge pairs.
        set.deliveries.push_back({set.deliveries[3].edge, rng.next_unit(), Side::minus});
        DistanceOracle o(g, set, widths, beta, 2);
        for (std::size_t a = 0; a < set.deliveries.size(); ++a)
            for (std::size_t b = 0; b < set.deliveries.size(); ++b) {
                double want = a == b ? 0.0 : augmented_weight(g, set.deliveries[a], set.deliveries[b], widths, beta);
                ASSERT_NEAR(o(a, b), want, 1e-9) << "trial " << trial << " pair " << a << "," << b;
            }
    }
}

TEST(Metric, SymmetricAndBetaMonotone) {
    auto m = grid_model();
    auto g = build_graph(m);
    auto set = sample_deliveries(m, g, 40, 9);
    auto widths = street_widths(m);
    DistanceOracle o(g, set, widths, 5);
    DistanceOracle higher(g, set, widths, 8);
    for (std::size_t a = 0; a < o.size(); ++a)
        for (std::size_t b = 0; b < o.size(); ++b) {
            ASSERT_EQ(o(a, b), o(b, a));
            if (a != b) {
                EXPECT_NEAR(higher(a, b) - o(a, b), 3.0, 1e-9);
                EXPECT_GE(o(a, b), 5.0);
            }
        }
}

TEST(Metric, WorkerCountDoesNotChangeResults) {
    auto m = grid_model();
    auto g = build_graph(m);
    auto set = sample_deliveries(m, g, 60, 4);
    auto one = DistanceOracle::from_model(m, g, set, 1);
    auto many = DistanceOracle::from_model(m, g, set, 8);
    for (std::size_t a = 0; a < one.size(); ++a)
        for (std::size_t b = 0; b < one.size(); ++b)
            ASSERT_EQ(one(a, b), many(a, b));
}

TEST(Metric, DisconnectedPairHasNoPath) {
    StreetGraph g;
    g.vertices = {{0, 0}, {1, 0}, {5, 5}, {6, 5}};
    g.edges = {{0, 1, 0, 0, 1}, {2, 3, 0, 0, 1}};
    DistanceOracle o(g, deliveries({{0, 0.5, Side::plus}, {1, 0.5, Side::plus}}), {1}, 0);
    try {
        o(0, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("no path"), std::string::npos);
    }
}

TEST(Metric, BadDeliveriesRejected) {
    auto g = single_edge(10);
    EXPECT_THROW(DistanceOracle(g, deliveries({{1, 0.5, Side::plus}}), {1}, 0), Error);
    EXPECT_THROW(DistanceOracle(g, deliveries({{0, 1.5, Side::plus}}), {1}, 0), Error);
}

TEST(Metric, MatrixShapeAndFormat) {
    auto g = single_edge(100);
    DistanceOracle o(g, deliveries({{0, 0.2, Side::plus}, {0, 0.7, Side::plus}, {0, 0.9, Side::minus}}), {10}, 5);
    std::string text = export_matrix(o, 2);
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "3");
    std::getline(in, line);
    EXPECT_EQ(line, "0.00 55.00 85.00");
    std::getline(in, line);
    EXPECT_EQ(line, "55.00 0.00 35.00");
    std::getline(in, line);
    EXPECT_EQ(line, "85.00 35.00 0.00");
    EXPECT_FALSE(std::getline(in, line));
}

TEST(Metric, MatrixCap) {
    auto g = single_edge(10);
    DistanceOracle o(g, deliveries({{0, 0.2, Side::plus}, {0, 0.7, Side::plus}, {0, 0.9, Side::plus}}), {1}, 0);
    try {
        export_matrix(o, 2, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("oracle"), std::string::npos);
    }
    EXPECT_NO_THROW(export_matrix(o, 2, 3));
}
