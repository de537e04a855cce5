#pragma once

#include <cstdint>
#include <vector>

#include "nnsp/graph.hpp"

namespace nnsp {

// Disjoint cover of the nodes by clusters 0..cluster_count-1.
struct Partition {
    std::vector<int> cluster_of;
    int cluster_count = 0;

    void validate(const WeightedGraph& g) const;
    std::vector<std::vector<int>> members() const;
};

// One coefficient per cluster.
struct ClusterCoefficients {
    std::vector<double> a;
};

// Edges whose endpoints lie in different clusters.
EdgeSet boundary(const WeightedGraph& g, const Partition& part);

// x[i] = a[cluster_of[i]].
GraphSignal clustered_signal(const WeightedGraph& g, const Partition& part,
                             const ClusterCoefficients& coeffs);

// Assigns each node to the nearest center by hop count, ties broken toward
// the lowest center index. Center k seeds cluster k.
Partition geodesic_partition(const WeightedGraph& g,
                             const std::vector<int>& centers);

struct BestClusteredFit {
    ClusterCoefficients coeffs;
    double value = 0.0;
};

// min over a of || x - sum_C a_C I_C ||_TV. Interior edges do not depend on
// a; the boundary terms are minimized by cyclic coordinate descent with
// exact weighted-median updates. The gauge is fixed by pinning a_0 to the
// mean of x over cluster 0.
BestClusteredFit best_clustered_tv(const WeightedGraph& g,
                                   const Partition& part,
                                   const GraphSignal& x);

struct GeneratedInstance {
    BuildResult built;
    Partition part;
    GraphSignal signal;
};

// Chain of n nodes in `clusters` consecutive equal-size clusters,
// intra-cluster weight w_in, inter-cluster weight w_out, cluster
// coefficients cycling through `coeff_cycle`. Original node ids are 1..n.
GeneratedInstance chain_graph_experiment(
    int n = 100, int clusters = 10, double w_in = 4.0, double w_out = 2.0,
    const std::vector<double>& coeff_cycle = {1.0, 5.0});

// Chain of n nodes split into two halves, unit intra-cluster weights, the
// single crossing edge weighted 1/delta, signal values (1, 2).
GeneratedInstance two_cluster_chain(int n, double delta);

}  // namespace nnsp
