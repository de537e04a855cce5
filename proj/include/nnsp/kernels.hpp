#pragma once

#include <span>
#include <vector>

#include "nnsp/graph.hpp"

/*
 * Data-parallel inner loops shared by the TV seminorm and the recovery
 * solver. Every kernel exists twice: kernels::serial is the reference
 * implementation, kernels::omp the OpenMP one. Element values are computed
 * by identical expressions in both, so node/edge arrays agree bitwise;
 * only the order of summation in the reductions may differ.
 */
namespace nnsp::kernels {

enum class Backend { Serial, Parallel };

namespace serial {

// d[e] = x[head] - x[tail] (unweighted; weights enter via norms/clipping).
void incidence_apply(const WeightedGraph& g, std::span<const double> x,
                     std::span<double> d);

// out[i] = sum over incident edges of sign(i,e) * d[e].
void incidence_adjoint(const WeightedGraph& g, std::span<const double> d,
                       std::span<double> out);

double tv(const WeightedGraph& g, std::span<const double> x);

double tv_masked(const WeightedGraph& g, std::span<const double> x,
                 std::span<const char> edge_mask);

// y[e] = clamp(y[e] + sigma * (xbar[head] - xbar[tail]), -W_e, W_e)
void dual_step(const WeightedGraph& g, std::span<const double> xbar,
               double sigma, std::span<double> y);

// Gathers adj = D^T y, overwrites sampled coordinates with their observed
// values, advances x and the extrapolation xbar. Returns nothing; the
// caller derives step norms from the updated arrays.
void primal_step(const WeightedGraph& g, std::span<const double> y,
                 double tau, std::span<const char> sampled,
                 std::span<const double> observed, std::span<double> x,
                 std::span<double> xbar, std::span<double> adjoint_scratch);

double max_abs_diff(std::span<const double> a, std::span<const double> b);

double max_abs(std::span<const double> v);

double max_abs_where(std::span<const double> v, std::span<const char> mask,
                     char keep);

}  // namespace serial

namespace omp {

void incidence_apply(const WeightedGraph& g, std::span<const double> x,
                     std::span<double> d);

void incidence_adjoint(const WeightedGraph& g, std::span<const double> d,
                       std::span<double> out);

double tv(const WeightedGraph& g, std::span<const double> x);

double tv_masked(const WeightedGraph& g, std::span<const double> x,
                 std::span<const char> edge_mask);

void dual_step(const WeightedGraph& g, std::span<const double> xbar,
               double sigma, std::span<double> y);

void primal_step(const WeightedGraph& g, std::span<const double> y,
                 double tau, std::span<const char> sampled,
                 std::span<const double> observed, std::span<double> x,
                 std::span<double> xbar, std::span<double> adjoint_scratch);

double max_abs_diff(std::span<const double> a, std::span<const double> b);

double max_abs(std::span<const double> v);

double max_abs_where(std::span<const double> v, std::span<const char> mask,
                     char keep);

}  // namespace omp

Backend default_backend();

}  // namespace nnsp::kernels

namespace nnsp {

// TV seminorm: sum over edges of W_e * |x[head] - x[tail]|.
double tv(const WeightedGraph& g, const GraphSignal& x,
          kernels::Backend backend = kernels::default_backend());

// TV restricted to the edge subset S.
double tv_restricted(const WeightedGraph& g, const GraphSignal& x,
                     const EdgeSet& s,
                     kernels::Backend backend = kernels::default_backend());

std::vector<double> incidence_apply(const WeightedGraph& g,
                                    const GraphSignal& x);

GraphSignal incidence_adjoint(const WeightedGraph& g,
                              const std::vector<double>& d);

// Upper bound on the spectral norm of the incidence operator, used to set
// solver step sizes. Power iteration on D^T D (the unweighted Laplacian)
// with a deterministic start, times a 1.01 safety factor. Returns 1 for a
// graph without edges.
double operator_norm_bound(const WeightedGraph& g);

}  // namespace nnsp
