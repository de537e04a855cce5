// Times the serial reference kernels against the OpenMP ones on a large
// grid, then runs the full solver on both backends and checks the iterates
// agree bitwise (control flow uses only max-reductions, so they must).
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "nnsp/experiment.hpp"
#include "nnsp/kernels.hpp"
#include "nnsp/recovery.hpp"
#include "nnsp/rng.hpp"
#include "nnsp/sampling.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_per_call(int reps, const std::function<void()>& fn) {
    fn();  // warm-up
    auto t0 = Clock::now();
    for (int r = 0; r < reps; ++r) fn();
    auto t1 = Clock::now();
    return std::chrono::duration<double>(t1 - t0).count() / reps;
}

void row(const char* name, double serial, double parallel) {
    std::printf("%-18s %12.3f us %12.3f us %8.2fx\n", name, serial * 1e6,
                parallel * 1e6, serial / parallel);
}

}  // namespace

int main() {
    const int side = 400;  // 160k nodes, ~319k edges
    nnsp::BuildResult built =
        nnsp::build_graph(nnsp::grid_edge_list(side, side));
    const nnsp::WeightedGraph& g = built.graph;

    const int n = g.node_count();
    const int m = g.edge_count();
#ifdef _OPENMP
    std::printf("grid %dx%d: %d nodes, %d edges, %d threads\n\n", side, side,
                n, m, omp_get_max_threads());
#else
    std::printf("grid %dx%d: %d nodes, %d edges (OpenMP disabled)\n\n", side,
                side, n, m);
#endif

    nnsp::SplitMix64 rng(41);
    std::vector<double> x(n), d(m), y(m);
    for (double& v : x) v = rng.next_normal();
    for (double& v : y) v = 0.5 * rng.next_normal();

    nnsp::SamplingSet samples = nnsp::uniform_random(n, n / 50, 7);
    std::vector<char> sampled = samples.mask(n);
    std::vector<double> observed(n, 0.0);

    std::vector<double> xs = x, xp = x, xbs = x, xbp = x, ss(n), sp(n);
    std::vector<double> ys = y, yp = y;

    const int reps = 20;
    std::printf("%-18s %15s %15s %9s\n", "kernel", "serial", "openmp",
                "speedup");

    row("incidence_apply",
        seconds_per_call(reps,
                         [&] { nnsp::kernels::serial::incidence_apply(g, x, d); }),
        seconds_per_call(reps,
                         [&] { nnsp::kernels::omp::incidence_apply(g, x, d); }));
    row("incidence_adjoint",
        seconds_per_call(
            reps, [&] { nnsp::kernels::serial::incidence_adjoint(g, d, ss); }),
        seconds_per_call(
            reps, [&] { nnsp::kernels::omp::incidence_adjoint(g, d, sp); }));
    row("tv",
        seconds_per_call(reps, [&] { nnsp::kernels::serial::tv(g, x); }),
        seconds_per_call(reps, [&] { nnsp::kernels::omp::tv(g, x); }));
    row("dual_step",
        seconds_per_call(
            reps, [&] { nnsp::kernels::serial::dual_step(g, x, 0.3, ys); }),
        seconds_per_call(
            reps, [&] { nnsp::kernels::omp::dual_step(g, x, 0.3, yp); }));
    row("primal_step",
        seconds_per_call(reps,
                         [&] {
                             nnsp::kernels::serial::primal_step(
                                 g, ys, 0.3, sampled, observed, xs, xbs, ss);
                         }),
        seconds_per_call(reps, [&] {
            nnsp::kernels::omp::primal_step(g, yp, 0.3, sampled, observed, xp,
                                            xbp, sp);
        }));

    // Full solves must agree bitwise between backends.
    nnsp::Observation obs;
    obs.sampling_set = samples;
    for (int v : samples.nodes()) obs.values.push_back(x[v]);
    nnsp::SolverConfig cfg;
    cfg.max_iterations = 200;
    cfg.tolerance = 1e-12;

    auto t0 = Clock::now();
    nnsp::SolverResult serial_res =
        nnsp::recover(g, obs, cfg, nnsp::kernels::Backend::Serial);
    auto t1 = Clock::now();
    nnsp::SolverResult omp_res =
        nnsp::recover(g, obs, cfg, nnsp::kernels::Backend::Parallel);
    auto t2 = Clock::now();

    bool identical = serial_res.signal == omp_res.signal &&
                     serial_res.iterations == omp_res.iterations;
    std::printf("\nrecover (%d iters): serial %.3f s, openmp %.3f s, "
                "iterates bitwise %s\n",
                serial_res.iterations,
                std::chrono::duration<double>(t1 - t0).count(),
                std::chrono::duration<double>(t2 - t1).count(),
                identical ? "equal" : "DIFFERENT");
    return identical ? 0 : 1;
}
