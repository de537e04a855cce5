#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "nnsp/graph.hpp"
#include "nnsp/kernels.hpp"
#include "nnsp/rng.hpp"

using namespace nnsp;

namespace {

BuildResult path3() {
    return build_graph({{1, 2, 1.0}, {2, 3, 1.0}});
}

BuildResult path3_weighted() {
    return build_graph({{1, 2, 2.0}, {2, 3, 1.0}});
}

// Random connected-ish graph for property tests: a path plus extra chords.
BuildResult random_graph(std::uint64_t seed, int n, int extra) {
    SplitMix64 rng(seed);
    std::vector<EdgeTriple> t;
    for (int i = 0; i + 1 < n; ++i)
        t.push_back({i, i + 1, 0.25 + rng.next_double()});
    int added = 0;
    while (added < extra) {
        int u = static_cast<int>(rng.next_below(n));
        int v = static_cast<int>(rng.next_below(n));
        if (u == v || std::abs(u - v) == 1) continue;
        bool dup = false;
        for (const auto& e : t)
            dup = dup || (std::min<std::int64_t>(e.u, e.v) == std::min(u, v) &&
                          std::max<std::int64_t>(e.u, e.v) == std::max(u, v));
        if (dup) continue;
        t.push_back({u, v, 0.25 + rng.next_double()});
        ++added;
    }
    return build_graph(t);
}

GraphSignal random_signal(std::uint64_t seed, int n) {
    SplitMix64 rng(seed);
    GraphSignal x(n);
    for (double& v : x) v = rng.next_normal();
    return x;
}

}  // namespace

TEST_CASE("build_graph compacts ids in first-appearance order") {
    auto b = build_graph({{7, 3, 1.0}, {3, 12, 2.0}});
    CHECK(b.graph.node_count() == 3);
    CHECK(b.graph.edge_count() == 2);
    CHECK(b.original_ids == std::vector<std::int64_t>{7, 3, 12});
    CHECK(b.require_index(7) == 0);
    CHECK(b.require_index(3) == 1);
    CHECK(b.require_index(12) == 2);
    CHECK_THROWS_AS(b.require_index(99), InvalidEdge);
    // Orientation: head is the first-listed endpoint.
    CHECK(b.graph.edge(0).head == 0);
    CHECK(b.graph.edge(0).tail == 1);
    CHECK(b.graph.edge(1).head == 1);
    CHECK(b.graph.edge(1).tail == 2);
}

TEST_CASE("build_graph minimal path") {
    auto b = path3();
    CHECK(b.graph.node_count() == 3);
    CHECK(b.graph.edge_count() == 2);
}

TEST_CASE("construction errors") {
    CHECK_THROWS_AS(build_graph({{1, 2, 1.0}, {2, 1, 3.0}}), DuplicateEdge);
    CHECK_THROWS_AS(build_graph({{1, 1, 1.0}}), SelfLoop);
    CHECK_THROWS_AS(build_graph({{1, 2, 0.0}}), InvalidWeight);
    CHECK_THROWS_AS(build_graph({{1, 2, -1.0}}), InvalidWeight);
    CHECK_THROWS_AS(build_graph({{1, 2, std::nan("")}}), InvalidWeight);
    CHECK_THROWS_AS(build_graph({}), InvalidSize);
    CHECK_THROWS_AS(build_graph({{-1, 2, 1.0}}), InvalidEdge);
    CHECK_THROWS_AS(
        WeightedGraph(2, {OrientedEdge{0, 2, 1.0}}), InvalidEdge);
}

TEST_CASE("incidence index is consistent with the edge list") {
    auto b = random_graph(11, 30, 12);
    const auto& g = b.graph;
    std::vector<int> head_seen(g.edge_count(), 0), tail_seen(g.edge_count(), 0);
    for (int i = 0; i < g.node_count(); ++i) {
        for (const auto& inc : g.incident(i)) {
            if (inc.sign == 1) {
                CHECK(g.edge(inc.edge).head == i);
                ++head_seen[inc.edge];
            } else {
                CHECK(inc.sign == -1);
                CHECK(g.edge(inc.edge).tail == i);
                ++tail_seen[inc.edge];
            }
        }
    }
    for (int e = 0; e < g.edge_count(); ++e) {
        CHECK(head_seen[e] == 1);
        CHECK(tail_seen[e] == 1);
    }
}

TEST_CASE("tv examples") {
    auto b = path3_weighted();
    CHECK(tv(b.graph, {0.0, 0.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tv(b.graph, {2.5, 2.5, 2.5}) == 0.0);
    CHECK_THROWS_AS(tv(b.graph, {1.0, 2.0}), DimensionMismatch);

    // Two-cluster chain: single jump of 1 across the weight-1/2 edge.
    std::vector<EdgeTriple> t;
    for (int i = 1; i < 10; ++i)
        t.push_back({i, i + 1, i == 5 ? 0.5 : 1.0});
    auto chain = build_graph(t);
    GraphSignal x(10, 1.0);
    for (int i = 5; i < 10; ++i) x[i] = 2.0;
    CHECK(tv(chain.graph, x) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("tv_restricted examples and additivity") {
    auto b = random_graph(17, 25, 10);
    const auto& g = b.graph;
    auto x = random_signal(5, g.node_count());

    CHECK(tv_restricted(g, x, EdgeSet{}) == 0.0);
    CHECK(tv_restricted(g, x, EdgeSet::all(g)) ==
          doctest::Approx(tv(g, x)).epsilon(1e-12));

    SplitMix64 rng(23);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<int> idx;
        for (int e = 0; e < g.edge_count(); ++e)
            if (rng.next_below(2)) idx.push_back(e);
        EdgeSet s(idx);
        EdgeSet c = s.complement(g);
        CHECK(tv_restricted(g, x, s) + tv_restricted(g, x, c) ==
              doctest::Approx(tv(g, x)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(tv_restricted(g, x, EdgeSet{{g.edge_count()}}),
                    InvalidEdgeSet);
}

TEST_CASE("tv orientation and shift invariance") {
    std::vector<EdgeTriple> fwd{{0, 1, 1.5}, {1, 2, 0.5}, {2, 3, 2.0}};
    std::vector<EdgeTriple> rev{{1, 0, 1.5}, {2, 1, 0.5}, {3, 2, 2.0}};
    auto a = build_graph(fwd);
    auto b = build_graph(rev);
    auto x = random_signal(9, 4);
    // Compaction is by first appearance, so indices differ between the two
    // builds; route the signal through the original ids.
    GraphSignal xb(4);
    for (int i = 0; i < 4; ++i)
        xb[b.require_index(a.original_ids[i])] = x[i];
    CHECK(tv(a.graph, x) == doctest::Approx(tv(b.graph, xb)).epsilon(1e-12));

    GraphSignal shifted = x;
    for (double& v : shifted) v += 17.25;
    CHECK(tv(a.graph, shifted) == doctest::Approx(tv(a.graph, x)).epsilon(1e-12));
}

TEST_CASE("incidence_apply examples") {
    auto b = path3();
    CHECK(incidence_apply(b.graph, {0.0, 0.0, 1.0}) ==
          std::vector<double>{0.0, -1.0});
    CHECK(incidence_apply(b.graph, {1.0, 0.0, 0.0}) ==
          std::vector<double>{1.0, 0.0});
    CHECK(incidence_apply(b.graph, {3.0, 3.0, 3.0}) ==
          std::vector<double>{0.0, 0.0});
    CHECK_THROWS_AS(incidence_apply(b.graph, {1.0}), DimensionMismatch);
}

TEST_CASE("incidence_adjoint examples and adjointness") {
    auto b = path3();
    CHECK(incidence_adjoint(b.graph, {1.0, 0.0}) ==
          GraphSignal{1.0, -1.0, 0.0});
    CHECK(incidence_adjoint(b.graph, {0.0, 0.0}) ==
          GraphSignal{0.0, 0.0, 0.0});
    CHECK_THROWS_AS(incidence_adjoint(b.graph, {1.0, 2.0, 3.0}),
                    DimensionMismatch);

    auto big = random_graph(31, 40, 20);
    const auto& g = big.graph;
    SplitMix64 rng(77);
    for (int rep = 0; rep < 100; ++rep) {
        GraphSignal x(g.node_count()), y(g.edge_count());
        for (double& v : x) v = rng.next_normal();
        for (double& v : y) v = rng.next_normal();
        auto dx = incidence_apply(g, x);
        auto aty = incidence_adjoint(g, y);
        double lhs = std::inner_product(dx.begin(), dx.end(), y.begin(), 0.0);
        double rhs = std::inner_product(x.begin(), x.end(), aty.begin(), 0.0);
        double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
        CHECK(std::abs(lhs - rhs) / scale <= 1e-12);
    }
}

TEST_CASE("tv equals weighted l1 norm of incidence differences") {
    auto b = random_graph(41, 20, 8);
    const auto& g = b.graph;
    auto x = random_signal(42, g.node_count());
    auto d = incidence_apply(g, x);
    double acc = 0.0;
    for (int e = 0; e < g.edge_count(); ++e)
        acc += g.edge(e).weight * std::abs(d[e]);
    CHECK(tv(g, x) == doctest::Approx(acc).epsilon(1e-12));
}

TEST_CASE("operator_norm_bound") {
    auto single = build_graph({{0, 1, 1.0}});
    double l1 = operator_norm_bound(single.graph);
    CHECK(l1 >= std::sqrt(2.0));
    CHECK(l1 <= 1.5);

    double l2 = operator_norm_bound(path3().graph);
    CHECK(l2 >= std::sqrt(3.0));
    CHECK(l2 <= 1.01 * std::sqrt(3.0) + 1e-9);

    WeightedGraph lonely(3, {});
    CHECK(operator_norm_bound(lonely) == 1.0);

    // Upper bound property on assorted graphs: L^2 >= lambda_max(D^T D),
    // checked against the Rayleigh quotient of many random vectors.
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        auto b = random_graph(seed, 15, 6);
        const auto& g = b.graph;
        double l = operator_norm_bound(g);
        SplitMix64 rng(seed + 100);
        for (int rep = 0; rep < 50; ++rep) {
            GraphSignal x(g.node_count());
            for (double& v : x) v = rng.next_normal();
            auto d = incidence_apply(g, x);
            double num = std::inner_product(d.begin(), d.end(), d.begin(), 0.0);
            double den =
                std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
            CHECK(num <= (l * l) * den * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("EdgeSet basics") {
    auto b = random_graph(51, 10, 3);
    const auto& g = b.graph;
    EdgeSet s({3, 1, 3, 5});
    CHECK(s.indices() == std::vector<int>{1, 3, 5});
    CHECK(s.contains(3));
    CHECK(!s.contains(2));
    EdgeSet c = s.complement(g);
    CHECK(c.size() + s.size() == static_cast<std::size_t>(g.edge_count()));
    for (int e : c.indices()) CHECK(!s.contains(e));
    auto mask = s.mask(g);
    for (int e = 0; e < g.edge_count(); ++e)
        CHECK(static_cast<bool>(mask[e]) == s.contains(e));
    CHECK_THROWS_AS(EdgeSet{{-1}}.validate(g), InvalidEdgeSet);
}
