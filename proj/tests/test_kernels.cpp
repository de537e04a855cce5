#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "nnsp/graph.hpp"
#include "nnsp/kernels.hpp"
#include "nnsp/rng.hpp"

using namespace nnsp;

namespace {

BuildResult random_graph(std::uint64_t seed, int n, int extra) {
    SplitMix64 rng(seed);
    std::vector<EdgeTriple> t;
    for (int i = 0; i + 1 < n; ++i)
        t.push_back({i, i + 1, 0.25 + rng.next_double()});
    int added = 0;
    while (added < extra) {
        int u = static_cast<int>(rng.next_below(n));
        int v = static_cast<int>(rng.next_below(n));
        if (u == v || std::abs(u - v) <= 1) continue;
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

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    return std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("serial and omp elementwise kernels are bitwise identical") {
    auto b = random_graph(101, 200, 80);
    const auto& g = b.graph;
    SplitMix64 rng(7);
    GraphSignal x(g.node_count()), xbar(g.node_count());
    std::vector<double> y(g.edge_count());
    for (double& v : x) v = rng.next_normal();
    for (double& v : xbar) v = rng.next_normal();
    for (double& v : y) v = rng.next_normal() * 0.3;

    std::vector<double> out_s(g.edge_count()), out_p(g.edge_count());
    kernels::serial::incidence_apply(g, x, out_s);
    kernels::omp::incidence_apply(g, x, out_p);
    CHECK(bitwise_equal(out_s, out_p));

    GraphSignal at_s(g.node_count()), at_p(g.node_count());
    kernels::serial::incidence_adjoint(g, y, at_s);
    kernels::omp::incidence_adjoint(g, y, at_p);
    CHECK(bitwise_equal(at_s, at_p));

    std::vector<double> ys = y, yp = y;
    kernels::serial::dual_step(g, xbar, 0.17, ys);
    kernels::omp::dual_step(g, xbar, 0.17, yp);
    CHECK(bitwise_equal(ys, yp));

    std::vector<char> sampled(g.node_count(), 0);
    GraphSignal observed(g.node_count(), 0.0);
    for (int i = 0; i < g.node_count(); i += 7) {
        sampled[i] = 1;
        observed[i] = rng.next_normal();
    }
    GraphSignal xs = x, xp = x, xbs(g.node_count()), xbp(g.node_count());
    GraphSignal scr_s(g.node_count()), scr_p(g.node_count());
    kernels::serial::primal_step(g, ys, 0.13, sampled, observed, xs, xbs, scr_s);
    kernels::omp::primal_step(g, yp, 0.13, sampled, observed, xp, xbp, scr_p);
    CHECK(bitwise_equal(xs, xp));
    CHECK(bitwise_equal(xbs, xbp));
    CHECK(bitwise_equal(scr_s, scr_p));
}

TEST_CASE("dual_step clips to the weight box") {
    auto b = build_graph({{0, 1, 0.5}, {1, 2, 2.0}});
    const auto& g = b.graph;
    std::vector<double> y{0.4, -1.9};
    // Large xbar differences push both coordinates far outside the box.
    GraphSignal xbar{100.0, 0.0, 50.0};
    kernels::serial::dual_step(g, xbar, 1.0, y);
    CHECK(y[0] == 0.5);    // clipped to +W_0
    CHECK(y[1] == -2.0);   // head-tail = -50 drives it to -W_1
    // No movement when sigma = 0 beyond clipping.
    std::vector<double> y2{3.0, -5.0};
    kernels::serial::dual_step(g, xbar, 0.0, y2);
    CHECK(y2[0] == 0.5);
    CHECK(y2[1] == -2.0);
}

TEST_CASE("primal_step plants observations and forms the extrapolation") {
    auto b = build_graph({{0, 1, 1.0}, {1, 2, 1.0}});
    const auto& g = b.graph;
    std::vector<double> y{1.0, -2.0};
    std::vector<char> sampled{1, 0, 0};
    GraphSignal observed{9.0, 0.0, 0.0};
    GraphSignal x{1.0, 2.0, 3.0}, xbar(3), scratch(3);
    kernels::serial::primal_step(g, y, 0.5, sampled, observed, x, xbar, scratch);
    // adjoint of y: node0 = +1, node1 = -1 + -2 = -3, node2 = +2.
    CHECK(scratch == GraphSignal{1.0, -3.0, 2.0});
    CHECK(x[0] == 9.0);                 // planted
    CHECK(x[1] == doctest::Approx(2.0 - 0.5 * -3.0));
    CHECK(x[2] == doctest::Approx(3.0 - 0.5 * 2.0));
    CHECK(xbar[0] == doctest::Approx(2.0 * 9.0 - 1.0));
    CHECK(xbar[1] == doctest::Approx(2.0 * 3.5 - 2.0));
    CHECK(xbar[2] == doctest::Approx(2.0 * 2.0 - 3.0));
}

TEST_CASE("reduction kernels match serial within relative 1e-12") {
    auto b = random_graph(311, 150, 60);
    const auto& g = b.graph;
    SplitMix64 rng(5);
    GraphSignal x(g.node_count()), z(g.node_count());
    for (double& v : x) v = rng.next_normal();
    for (double& v : z) v = rng.next_normal();
    std::vector<char> keep(g.node_count(), 0);
    for (int i = 0; i < g.node_count(); i += 3) keep[i] = 1;

    double s, p;
    s = kernels::serial::tv(g, x);
    p = kernels::omp::tv(g, x);
    CHECK(std::abs(s - p) <= 1e-12 * std::max(1.0, std::abs(s)));

    std::vector<char> emask(g.edge_count(), 0);
    for (int e = 0; e < g.edge_count(); e += 2) emask[e] = 1;
    s = kernels::serial::tv_masked(g, x, emask);
    p = kernels::omp::tv_masked(g, x, emask);
    CHECK(std::abs(s - p) <= 1e-12 * std::max(1.0, std::abs(s)));

    s = kernels::serial::max_abs_diff(x, z);
    p = kernels::omp::max_abs_diff(x, z);
    CHECK(s == p);  // max of identical candidates is exact

    s = kernels::serial::max_abs(x);
    p = kernels::omp::max_abs(x);
    CHECK(s == p);

    s = kernels::serial::max_abs_where(x, keep, 0);
    p = kernels::omp::max_abs_where(x, keep, 0);
    CHECK(s == p);
}

TEST_CASE("max reductions small examples") {
    GraphSignal a{1.0, -4.0, 2.0}, c{0.5, -3.0, 2.0};
    CHECK(kernels::serial::max_abs(a) == 4.0);
    CHECK(kernels::serial::max_abs_diff(a, c) == 1.0);
    std::vector<char> where{0, 1, 0};
    CHECK(kernels::serial::max_abs_where(a, where, 1) == 4.0);
    CHECK(kernels::serial::max_abs_where(a, where, 0) == 2.0);
    CHECK(kernels::serial::max_abs(GraphSignal{}) == 0.0);
}
