#include "nnsp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nnsp::kernels {

// Below this many elements the OpenMP variants run the loop inline; thread
// start-up would dominate.
static constexpr int kGrain = 2048;

namespace serial {

void incidence_apply(const WeightedGraph& g, std::span<const double> x,
                     std::span<double> d) {
    const auto& edges = g.edges();
    for (std::size_t e = 0; e < edges.size(); ++e)
        d[e] = x[edges[e].head] - x[edges[e].tail];
}

void incidence_adjoint(const WeightedGraph& g, std::span<const double> d,
                       std::span<double> out) {
    for (int i = 0; i < g.node_count(); ++i) {
        double acc = 0.0;
        for (const auto& inc : g.incident(i)) acc += inc.sign * d[inc.edge];
        out[i] = acc;
    }
}

double tv(const WeightedGraph& g, std::span<const double> x) {
    const auto& edges = g.edges();
    double acc = 0.0;
    for (std::size_t e = 0; e < edges.size(); ++e)
        acc += edges[e].weight * std::abs(x[edges[e].head] - x[edges[e].tail]);
    return acc;
}

double tv_masked(const WeightedGraph& g, std::span<const double> x,
                 std::span<const char> edge_mask) {
    const auto& edges = g.edges();
    double acc = 0.0;
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (edge_mask[e])
            acc += edges[e].weight *
                   std::abs(x[edges[e].head] - x[edges[e].tail]);
    return acc;
}

void dual_step(const WeightedGraph& g, std::span<const double> xbar,
               double sigma, std::span<double> y) {
    const auto& edges = g.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto& ed = edges[e];
        double v = y[e] + sigma * (xbar[ed.head] - xbar[ed.tail]);
        y[e] = std::clamp(v, -ed.weight, ed.weight);
    }
}

void primal_step(const WeightedGraph& g, std::span<const double> y,
                 double tau, std::span<const char> sampled,
                 std::span<const double> observed, std::span<double> x,
                 std::span<double> xbar, std::span<double> adjoint_scratch) {
    for (int i = 0; i < g.node_count(); ++i) {
        double acc = 0.0;
        for (const auto& inc : g.incident(i)) acc += inc.sign * y[inc.edge];
        adjoint_scratch[i] = acc;
        double xi = sampled[i] ? observed[i] : x[i] - tau * acc;
        xbar[i] = 2.0 * xi - x[i];
        x[i] = xi;
    }
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double vi : v) m = std::max(m, std::abs(vi));
    return m;
}

double max_abs_where(std::span<const double> v, std::span<const char> mask,
                     char keep) {
    double m = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (mask[i] == keep) m = std::max(m, std::abs(v[i]));
    return m;
}

}  // namespace serial

namespace omp {

void incidence_apply(const WeightedGraph& g, std::span<const double> x,
                     std::span<double> d) {
    const auto& edges = g.edges();
    const int m = static_cast<int>(edges.size());
#pragma omp parallel for schedule(static) if (m > kGrain)
    for (int e = 0; e < m; ++e)
        d[e] = x[edges[e].head] - x[edges[e].tail];
}

void incidence_adjoint(const WeightedGraph& g, std::span<const double> d,
                       std::span<double> out) {
    const int n = g.node_count();
#pragma omp parallel for schedule(static) if (n > kGrain)
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (const auto& inc : g.incident(i)) acc += inc.sign * d[inc.edge];
        out[i] = acc;
    }
}

double tv(const WeightedGraph& g, std::span<const double> x) {
    const auto& edges = g.edges();
    const int m = static_cast<int>(edges.size());
    double acc = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : acc) if (m > kGrain)
    for (int e = 0; e < m; ++e)
        acc += edges[e].weight * std::abs(x[edges[e].head] - x[edges[e].tail]);
    return acc;
}

double tv_masked(const WeightedGraph& g, std::span<const double> x,
                 std::span<const char> edge_mask) {
    const auto& edges = g.edges();
    const int m = static_cast<int>(edges.size());
    double acc = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : acc) if (m > kGrain)
    for (int e = 0; e < m; ++e)
        if (edge_mask[e])
            acc += edges[e].weight *
                   std::abs(x[edges[e].head] - x[edges[e].tail]);
    return acc;
}

void dual_step(const WeightedGraph& g, std::span<const double> xbar,
               double sigma, std::span<double> y) {
    const auto& edges = g.edges();
    const int m = static_cast<int>(edges.size());
#pragma omp parallel for schedule(static) if (m > kGrain)
    for (int e = 0; e < m; ++e) {
        const auto& ed = edges[e];
        double v = y[e] + sigma * (xbar[ed.head] - xbar[ed.tail]);
        y[e] = std::clamp(v, -ed.weight, ed.weight);
    }
}

void primal_step(const WeightedGraph& g, std::span<const double> y,
                 double tau, std::span<const char> sampled,
                 std::span<const double> observed, std::span<double> x,
                 std::span<double> xbar, std::span<double> adjoint_scratch) {
    const int n = g.node_count();
    // Gather-only: each node reads y over its own incidence list, no
    // cross-node writes.
#pragma omp parallel for schedule(static) if (n > kGrain)
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (const auto& inc : g.incident(i)) acc += inc.sign * y[inc.edge];
        adjoint_scratch[i] = acc;
        double xi = sampled[i] ? observed[i] : x[i] - tau * acc;
        xbar[i] = 2.0 * xi - x[i];
        x[i] = xi;
    }
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    const int n = static_cast<int>(a.size());
    double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m) if (n > kGrain)
    for (int i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_abs(std::span<const double> v) {
    const int n = static_cast<int>(v.size());
    double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m) if (n > kGrain)
    for (int i = 0; i < n; ++i) m = std::max(m, std::abs(v[i]));
    return m;
}

double max_abs_where(std::span<const double> v, std::span<const char> mask,
                     char keep) {
    const int n = static_cast<int>(v.size());
    double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m) if (n > kGrain)
    for (int i = 0; i < n; ++i)
        if (mask[i] == keep) m = std::max(m, std::abs(v[i]));
    return m;
}

}  // namespace omp

Backend default_backend() {
#ifdef _OPENMP
    return Backend::Parallel;
#else
    return Backend::Serial;
#endif
}

}  // namespace nnsp::kernels

namespace nnsp {

using kernels::Backend;

static void require_signal(const WeightedGraph& g, const GraphSignal& x) {
    if (static_cast<int>(x.size()) != g.node_count())
        throw DimensionMismatch("signal length " + std::to_string(x.size()) +
                                " vs " + std::to_string(g.node_count()) +
                                " nodes");
}

double tv(const WeightedGraph& g, const GraphSignal& x, Backend backend) {
    require_signal(g, x);
    return backend == Backend::Serial ? kernels::serial::tv(g, x)
                                      : kernels::omp::tv(g, x);
}

double tv_restricted(const WeightedGraph& g, const GraphSignal& x,
                     const EdgeSet& s, Backend backend) {
    require_signal(g, x);
    s.validate(g);
    // Direct sum over the subset; cheaper than a masked full sweep for the
    // small boundary sets this is mostly called with.
    if (backend == Backend::Serial ||
        s.size() < static_cast<std::size_t>(g.edge_count()) / 4) {
        double acc = 0.0;
        for (int e : s.indices()) {
            const auto& ed = g.edge(e);
            acc += ed.weight * std::abs(x[ed.head] - x[ed.tail]);
        }
        return acc;
    }
    auto m = s.mask(g);
    return kernels::omp::tv_masked(g, x, m);
}

std::vector<double> incidence_apply(const WeightedGraph& g,
                                    const GraphSignal& x) {
    require_signal(g, x);
    std::vector<double> d(g.edge_count());
    kernels::omp::incidence_apply(g, x, d);
    return d;
}

GraphSignal incidence_adjoint(const WeightedGraph& g,
                              const std::vector<double>& d) {
    if (static_cast<int>(d.size()) != g.edge_count())
        throw DimensionMismatch("edge vector length " +
                                std::to_string(d.size()) + " vs " +
                                std::to_string(g.edge_count()) + " edges");
    GraphSignal out(g.node_count());
    kernels::omp::incidence_adjoint(g, d, out);
    return out;
}

/*
 * Power iteration on D^T D. Constants span the kernel of D^T D, so an
 * all-ones start would vanish on the first multiply; the deterministic
 * start alternates signs by node index instead, which targets the
 * high-frequency end of the spectrum. A second fixed pseudo-random start
 * guards against the alternating vector being orthogonal to the top
 * eigenspace on a particular graph; the larger Rayleigh estimate wins.
 */
double operator_norm_bound(const WeightedGraph& g) {
    if (g.node_count() <= 0) throw InvalidSize("empty graph");
    if (g.edge_count() == 0) return 1.0;

    const int n = g.node_count();
    const int steps = 50;

    auto run = [&](GraphSignal v) {
        std::vector<double> d(g.edge_count());
        GraphSignal w(n);
        double lambda = 0.0;
        for (int k = 0; k < steps; ++k) {
            double norm = 0.0;
            for (double vi : v) norm += vi * vi;
            norm = std::sqrt(norm);
            if (norm < 1e-300) return lambda;
            for (double& vi : v) vi /= norm;
            kernels::serial::incidence_apply(g, v, d);
            kernels::serial::incidence_adjoint(g, d, w);
            double rayleigh = 0.0;
            for (int i = 0; i < n; ++i) rayleigh += v[i] * w[i];
            lambda = std::max(lambda, rayleigh);
            v.swap(w);
        }
        return lambda;
    };

    GraphSignal alternating(n);
    for (int i = 0; i < n; ++i) alternating[i] = (i % 2 == 0) ? 1.0 : -1.0;

    GraphSignal scrambled(n);
    std::uint64_t s = 0x9e3779b97f4a7c15ULL;
    for (int i = 0; i < n; ++i) {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        scrambled[i] = static_cast<double>(s >> 11) * 0x1.0p-53 - 0.5;
    }

    double lambda = std::max(run(std::move(alternating)),
                             run(std::move(scrambled)));

    // lambda_max of a graph Laplacian is at least max degree + 1 whenever an
    // edge exists; lifts the estimate if both starts happened to stall.
    std::size_t max_deg = 0;
    for (int i = 0; i < n; ++i)
        max_deg = std::max(max_deg, g.incident(i).size());
    lambda = std::max(lambda, static_cast<double>(max_deg) + 1.0);

    return 1.01 * std::sqrt(lambda);
}

}  // namespace nnsp
