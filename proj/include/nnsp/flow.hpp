#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "nnsp/graph.hpp"
#include "nnsp/partition.hpp"
#include "nnsp/sampling.hpp"

namespace nnsp {

// +1 / -1 per boundary edge, aligned with the boundary EdgeSet order
// (ascending edge index).
struct Signature {
    std::vector<int> signs;
};

// Signed flow per edge; positive values run from tail toward head. Demands
// are the per-node signed incident sums the flow realizes.
struct FlowAssignment {
    std::vector<double> edge_flow;
    std::vector<double> node_demand;
};

/*
 * Feasibility of a flow that agrees with `fixed` on the fixed edges, keeps
 * |f[e]| <= W_e on all other edges, and has zero demand outside
 * `free_nodes`. Fixed edges are removed and their values folded into
 * residual node demands; a super node with unbounded arcs absorbs the free
 * nodes' demands; the rest is the standard circulation-with-demands
 * max-flow reduction, solved with Dinic.
 */
std::optional<FlowAssignment> flow_feasible(
    const WeightedGraph& g,
    const std::vector<std::pair<int, double>>& fixed,
    const SamplingSet& free_nodes, double saturation_tol = 1e-9);

struct Certificate {
    bool certified = false;
    double kappa = 0.0;
    bool below_threshold = false;  // kappa <= 1: feasibility holds/fails but
                                   // the property's kappa > 1 clause does not
    EdgeSet boundary;
    std::vector<Signature> signatures;      // all signatures, iff certified
    std::vector<FlowAssignment> witnesses;  // aligned with signatures
    std::optional<Signature> failing_signature;
    std::optional<std::size_t> failing_index;  // enumeration index of failure
    // Signatures decided: failing_index + 1 on refutation (the enumeration
    // prefix up to the lowest failure), the full count when certified.
    std::size_t checked = 0;
};

struct CertifyOptions {
    int signature_cap = 30;       // refuse boundaries larger than this
    double saturation_tol = 1e-9;
};

// Per-signature flow feasibility with boundary values kappa * sigma_e * W_e.
// Signatures are enumerated up to global sign flip (the first boundary edge
// is pinned to +1; a negated witness covers the flipped signature).
Certificate certify_nnsp(const WeightedGraph& g, const Partition& part,
                         const SamplingSet& samples, double kappa,
                         const CertifyOptions& opts = {});

// Largest certified kappa, located by doubling then bisection to 1e-3.
// Returns the doubling cap when no refuting kappa exists (empty boundary).
double max_kappa(const WeightedGraph& g, const Partition& part,
                 const SamplingSet& samples, const CertifyOptions& opts = {});

struct NspViolation {
    GraphSignal signal;
    double off_value = 0.0;  // ||u||_{E \ S}
    double on_value = 0.0;   // ||u||_S
};

struct NspReport {
    std::vector<NspViolation> violations;
    std::size_t checked = 0;
};

// Samples `trials` signals vanishing on the sampled nodes (standard normal
// elsewhere) plus deterministic adversarial candidates: the indicator of
// each connected component of the graph with S removed, and of each
// connected component of V minus the sampled nodes, all zeroed on the
// samples. Records every u with ||u||_{E\S} < kappa ||u||_S - 1e-9.
NspReport empirical_nsp_check(const WeightedGraph& g, const EdgeSet& s,
                              const SamplingSet& samples, double kappa,
                              int trials, std::uint64_t seed);

// Checks conservation (1e-7 off the free nodes) and interior capacity
// bounds (1e-9) of a returned flow; used on every witness.
bool verify_flow(const WeightedGraph& g, const FlowAssignment& f,
                 const std::vector<std::pair<int, double>>& fixed,
                 const SamplingSet& free_nodes, double conservation_tol = 1e-7,
                 double capacity_tol = 1e-9);

}  // namespace nnsp
