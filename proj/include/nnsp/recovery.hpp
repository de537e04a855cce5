#pragma once

#include <vector>

#include "nnsp/graph.hpp"
#include "nnsp/kernels.hpp"
#include "nnsp/partition.hpp"
#include "nnsp/sampling.hpp"

namespace nnsp {

// Observed signal values on a sampling set, aligned with its node order.
struct Observation {
    SamplingSet sampling_set;
    std::vector<double> values;

    void validate(const WeightedGraph& g) const;
};

struct SolverConfig {
    int max_iterations = 100000;
    double tolerance = 1e-8;   // on relative primal change and residual
    double step_scale = 1.0;   // in (0, 1]
    int trace_stride = 100;

    void validate() const;
};

struct TracePoint {
    int iteration;
    double tv_value;
    double residual;
};

// signal is the incumbent: the best-tv iterate observed at trace points.
// objective_trace reports the incumbent's tv, so tv_value is non-increasing
// and the last row matches tv(signal).
struct SolverResult {
    GraphSignal signal;
    int iterations = 0;
    std::vector<TracePoint> objective_trace;
    bool converged = false;
};

/*
 * Primal-dual hybrid gradient for
 *
 *   min ||D x||_{1,W}   s.t.  x[i] = observed[i] on the sampling set.
 *
 * Dual step: per-edge clip of y + sigma D xbar to [-W_e, W_e].
 * Primal step: x - tau D^T y with sampled coordinates overwritten by their
 * observations, then extrapolation xbar = 2 x_new - x_old.
 * tau = sigma = step_scale / L with L from operator_norm_bound.
 * Feasibility is exact at every iterate. Stops when the relative primal
 * change (inf-norm) and the dual stationarity residual |D^T y| off the
 * sampling set both drop below the tolerance.
 */
SolverResult recover(const WeightedGraph& g, const Observation& obs,
                     const SolverConfig& cfg = {},
                     kernels::Backend backend = kernels::default_backend());

double mse(const GraphSignal& a, const GraphSignal& b);

struct Theorem2Check {
    bool holds = false;
    double lhs = 0.0;  // tv(x_hat - x_true)
    double rhs = 0.0;  // 6 * best clustered approximation error of x_true
};

Theorem2Check check_theorem2_bound(const WeightedGraph& g,
                                   const Partition& part,
                                   const GraphSignal& x_true,
                                   const GraphSignal& x_hat);

}  // namespace nnsp
