#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "nnsp/graph.hpp"
#include "nnsp/kernels.hpp"
#include "nnsp/partition.hpp"
#include "oracles.hpp"

using namespace nnsp;

TEST_CASE("Partition validation") {
    auto b = build_graph({{0, 1, 1.0}, {1, 2, 1.0}});
    Partition ok{{0, 0, 1}, 2};
    CHECK_NOTHROW(ok.validate(b.graph));
    CHECK_THROWS_AS((Partition{{0, 0}, 1}.validate(b.graph)),
                    PartitionMismatch);
    CHECK_THROWS_AS((Partition{{0, 0, 2}, 2}.validate(b.graph)),
                    PartitionMismatch);
    CHECK_THROWS_AS((Partition{{0, 0, 0}, 2}.validate(b.graph)),
                    PartitionMismatch);  // cluster 1 empty
    CHECK_THROWS_AS((Partition{{0, -1, 0}, 1}.validate(b.graph)),
                    PartitionMismatch);

    auto groups = ok.members();
    CHECK(groups == std::vector<std::vector<int>>{{0, 1}, {2}});
}

TEST_CASE("boundary and clustered_signal") {
    auto b = build_graph({{0, 1, 1.0}, {1, 2, 3.0}, {2, 3, 1.0}});
    Partition part{{0, 0, 1, 1}, 2};
    auto bd = boundary(b.graph, part);
    CHECK(bd.indices() == std::vector<int>{1});

    auto x = clustered_signal(b.graph, part, ClusterCoefficients{{2.0, -1.0}});
    CHECK(x == GraphSignal{2.0, 2.0, -1.0, -1.0});
    CHECK(tv(b.graph, x) == doctest::Approx(9.0));
    CHECK_THROWS_AS(
        clustered_signal(b.graph, part, ClusterCoefficients{{1.0}}),
        DimensionMismatch);
}

TEST_CASE("geodesic_partition on a path") {
    auto b = build_graph(
        {{1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}, {4, 5, 1.0}});
    // Centers at the ends; the middle node ties and goes to the first center.
    auto part = geodesic_partition(b.graph, {b.require_index(1),
                                             b.require_index(5)});
    CHECK(part.cluster_count == 2);
    CHECK(part.cluster_of == std::vector<int>{0, 0, 0, 1, 1});
}

TEST_CASE("geodesic_partition errors") {
    auto b = build_graph({{0, 1, 1.0}, {1, 2, 1.0}});
    CHECK_THROWS_AS(geodesic_partition(b.graph, {}), InvalidSize);
    CHECK_THROWS_AS(geodesic_partition(b.graph, {5}), InvalidEdge);
    CHECK_THROWS_AS(geodesic_partition(b.graph, {0, 0}), DuplicateCenter);

    auto split = build_graph({{0, 1, 1.0}, {2, 3, 1.0}});
    CHECK_THROWS_AS(geodesic_partition(split.graph, {0}), DisconnectedGraph);
}

TEST_CASE("chain instance shape") {
    auto inst = chain_graph_experiment(100, 10, 4.0, 2.0, {1.0, 5.0});
    const auto& g = inst.built.graph;
    CHECK(g.node_count() == 100);
    CHECK(g.edge_count() == 99);
    CHECK(inst.built.original_ids.front() == 1);
    CHECK(inst.built.original_ids.back() == 100);

    auto bd = boundary(g, inst.part);
    CHECK(bd.size() == 9);
    CHECK(bd.indices() ==
          std::vector<int>{9, 19, 29, 39, 49, 59, 69, 79, 89});
    for (int e : bd.indices()) CHECK(g.edge(e).weight == 2.0);
    for (int e = 0; e < g.edge_count(); ++e)
        if (!bd.contains(e)) CHECK(g.edge(e).weight == 4.0);

    // 9 boundary jumps of height 4, weight 2 each.
    CHECK(tv(g, inst.signal) == doctest::Approx(72.0));
    CHECK(tv_restricted(g, inst.signal, bd) == doctest::Approx(72.0));
    CHECK(inst.signal[0] == 1.0);
    CHECK(inst.signal[10] == 5.0);
    CHECK(inst.signal[99] == 5.0);

    CHECK_THROWS_AS(chain_graph_experiment(100, 7), IndivisibleClusterSize);
    CHECK_THROWS_AS(chain_graph_experiment(100, 10, 4.0, 2.0, {}),
                    InvalidSize);
}

TEST_CASE("two-cluster chain shape") {
    auto inst = two_cluster_chain(10, 2.0);
    const auto& g = inst.built.graph;
    CHECK(g.node_count() == 10);
    CHECK(g.edge_count() == 9);
    auto bd = boundary(g, inst.part);
    REQUIRE(bd.size() == 1);
    CHECK(g.edge(bd.indices()[0]).weight == doctest::Approx(0.5));
    CHECK(tv(g, inst.signal) == doctest::Approx(0.5));

    auto heavy = two_cluster_chain(10, 0.5);
    auto bd2 = boundary(heavy.built.graph, heavy.part);
    CHECK(heavy.built.graph.edge(bd2.indices()[0]).weight ==
          doctest::Approx(2.0));
    CHECK(tv(heavy.built.graph, heavy.signal) == doctest::Approx(2.0));

    CHECK_THROWS_AS(two_cluster_chain(3, 1.0), InvalidSize);
    CHECK_THROWS_AS(two_cluster_chain(7, 1.0), InvalidSize);
    CHECK_THROWS_AS(two_cluster_chain(10, 0.0), InvalidWeight);
}

TEST_CASE("best_clustered_tv recovers an exactly clustered signal") {
    auto inst = chain_graph_experiment(100, 10);
    auto fit = best_clustered_tv(inst.built.graph, inst.part, inst.signal);
    CHECK(fit.value == doctest::Approx(0.0).epsilon(1e-12));
    REQUIRE(fit.coeffs.a.size() == 10);
    for (int l = 0; l < 10; ++l)
        CHECK(fit.coeffs.a[l] ==
              doctest::Approx(l % 2 == 0 ? 1.0 : 5.0).epsilon(1e-12));
}

TEST_CASE("best_clustered_tv of a spike is the spike's own tv") {
    auto inst = chain_graph_experiment(100, 10);
    GraphSignal x = inst.signal;
    x[5] += 1.0;  // interior node of cluster 0, both incident weights 4
    auto fit = best_clustered_tv(inst.built.graph, inst.part, x);
    CHECK(fit.value == doctest::Approx(8.0).epsilon(1e-9));
}

TEST_CASE("best_clustered_tv matches the grid oracle on a ramp") {
    auto inst = two_cluster_chain(8, 1.0);
    const auto& g = inst.built.graph;
    GraphSignal ramp(8);
    for (int i = 0; i < 8; ++i) ramp[i] = 0.3 * i - 1.0;
    auto fit = best_clustered_tv(g, inst.part, ramp);
    double oracle = oracles::grid_best_clustered_tv(g, inst.part, ramp);
    // The descent is exact here; the grid is only 0.01-accurate.
    CHECK(fit.value <= oracle + 1e-9);
    CHECK(oracle - fit.value <= 2e-2);

    // A noisy clustered signal, same comparison.
    GraphSignal noisy = inst.signal;
    double bumps[8] = {0.05, -0.1, 0.2, 0.0, -0.3, 0.12, -0.07, 0.01};
    for (int i = 0; i < 8; ++i) noisy[i] += bumps[i];
    auto fit2 = best_clustered_tv(g, inst.part, noisy);
    double oracle2 = oracles::grid_best_clustered_tv(g, inst.part, noisy);
    CHECK(fit2.value <= oracle2 + 1e-9);
    CHECK(oracle2 - fit2.value <= 2e-2);
}

TEST_CASE("best_clustered_tv value is invariant to the input's gauge") {
    auto inst = chain_graph_experiment(40, 4);
    GraphSignal x = inst.signal;
    x[3] += 0.7;
    x[17] -= 0.4;
    auto base = best_clustered_tv(inst.built.graph, inst.part, x);
    GraphSignal shifted = x;
    for (double& v : shifted) v += 123.0;
    auto moved = best_clustered_tv(inst.built.graph, inst.part, shifted);
    CHECK(moved.value == doctest::Approx(base.value).epsilon(1e-9));
}
