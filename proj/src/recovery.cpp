#include "nnsp/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nnsp {

void Observation::validate(const WeightedGraph& g) const {
    if (sampling_set.empty())
        throw EmptySamplingSet("recovery needs at least one observed node");
    sampling_set.validate(g);
    if (values.size() != sampling_set.size())
        throw DimensionMismatch(std::to_string(values.size()) +
                                " values for " +
                                std::to_string(sampling_set.size()) +
                                " sampled nodes");
    for (double v : values)
        if (!std::isfinite(v))
            throw InvalidWeight("observed values must be finite");
}

void SolverConfig::validate() const {
    if (max_iterations < 1) throw InvalidSize("max_iterations must be >= 1");
    if (!(tolerance > 0.0)) throw InvalidWeight("tolerance must be positive");
    if (!(step_scale > 0.0) || step_scale > 1.0)
        throw InvalidWeight("step_scale must lie in (0, 1]");
    if (trace_stride < 1) throw InvalidSize("trace_stride must be >= 1");
}

/*
 * PDHG on the saddle form  min_x max_{|y_e| <= W_e}  <D x, y>  over the
 * affine set {x : x|_M = observed}. With tau = sigma = step_scale / L and
 * L >= ||D||, tau*sigma*||D||^2 < 1, which is the standard convergence
 * condition. The stopping residual max |(D^T y)_i| over i not in M is the
 * stationarity measure of the unconstrained coordinates.
 *
 * Raw PDHG iterates are not monotone in the objective, so the solver keeps
 * the incumbent: the best-tv iterate seen at trace points. The trace reports
 * the incumbent's tv (non-increasing by construction) and the incumbent is
 * what gets returned. Incumbent tv is always evaluated with the serial
 * reduction so both backends select identical iterates.
 */
SolverResult recover(const WeightedGraph& g, const Observation& obs,
                     const SolverConfig& cfg, kernels::Backend backend) {
    obs.validate(g);
    cfg.validate();

    const int n = g.node_count();
    const int m = g.edge_count();

    const std::vector<char> sampled = obs.sampling_set.mask(n);
    std::vector<double> observed(n, 0.0);
    {
        const auto& nodes = obs.sampling_set.nodes();
        for (std::size_t j = 0; j < nodes.size(); ++j)
            observed[nodes[j]] = obs.values[j];
    }

    GraphSignal x(n, 0.0);
    for (int i = 0; i < n; ++i)
        if (sampled[i]) x[i] = observed[i];
    GraphSignal xbar = x;
    std::vector<double> y(m, 0.0);
    std::vector<double> scratch(n, 0.0);

    const double l_bound = operator_norm_bound(g);
    const double tau = cfg.step_scale / l_bound;
    const double sigma = tau;

    const bool parallel = (backend == kernels::Backend::Parallel);

    SolverResult res;
    GraphSignal best = x;
    double best_tv = tv(g, x, kernels::Backend::Serial);
    int last_traced = -1;
    auto record = [&](int it, double residual) {
        double cur = tv(g, x, kernels::Backend::Serial);
        if (cur < best_tv) {
            best_tv = cur;
            best = x;
        }
        res.objective_trace.push_back(TracePoint{it, best_tv, residual});
        last_traced = it;
    };

    int it = 0;
    for (it = 1; it <= cfg.max_iterations; ++it) {
        if (parallel) {
            kernels::omp::dual_step(g, xbar, sigma, y);
            kernels::omp::primal_step(g, y, tau, sampled, observed, x, xbar,
                                      scratch);
        } else {
            kernels::serial::dual_step(g, xbar, sigma, y);
            kernels::serial::primal_step(g, y, tau, sampled, observed, x,
                                         xbar, scratch);
        }

        // primal_step leaves xbar = 2 x_new - x_old, so xbar - x recovers the
        // step x_new - x_old without keeping a copy.
        double step, scale, residual;
        if (parallel) {
            step = kernels::omp::max_abs_diff(xbar, x);
            scale = kernels::omp::max_abs(x);
            residual = kernels::omp::max_abs_where(scratch, sampled, 0);
        } else {
            step = kernels::serial::max_abs_diff(xbar, x);
            scale = kernels::serial::max_abs(x);
            residual = kernels::serial::max_abs_where(scratch, sampled, 0);
        }

        if (it % cfg.trace_stride == 0) record(it, residual);
        if (step <= cfg.tolerance * std::max(1.0, scale) &&
            residual <= cfg.tolerance) {
            res.converged = true;
            if (last_traced != it) record(it, residual);
            break;
        }
    }

    res.iterations = std::min(it, cfg.max_iterations);
    if (!res.converged && last_traced != cfg.max_iterations) {
        double residual = parallel
                              ? kernels::omp::max_abs_where(scratch, sampled, 0)
                              : kernels::serial::max_abs_where(scratch,
                                                               sampled, 0);
        record(cfg.max_iterations, residual);
    }
    res.signal = std::move(best);
    return res;
}

double mse(const GraphSignal& a, const GraphSignal& b) {
    if (a.size() != b.size())
        throw DimensionMismatch("mse over signals of lengths " +
                                std::to_string(a.size()) + " and " +
                                std::to_string(b.size()));
    if (a.empty()) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.size());
}

Theorem2Check check_theorem2_bound(const WeightedGraph& g,
                                   const Partition& part,
                                   const GraphSignal& x_true,
                                   const GraphSignal& x_hat) {
    if (x_true.size() != x_hat.size() ||
        static_cast<int>(x_true.size()) != g.node_count())
        throw DimensionMismatch("signal lengths vs node count");

    GraphSignal diff(x_true.size());
    for (std::size_t i = 0; i < diff.size(); ++i)
        diff[i] = x_hat[i] - x_true[i];

    Theorem2Check out;
    out.lhs = tv(g, diff);
    out.rhs = 6.0 * best_clustered_tv(g, part, x_true).value;
    out.holds = out.lhs <= out.rhs + 1e-6;
    return out;
}

}  // namespace nnsp
