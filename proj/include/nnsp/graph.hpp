#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "nnsp/errors.hpp"

namespace nnsp {

// Undirected edge with a fixed orientation: positive quantities on the edge
// point from tail toward head.
struct OrientedEdge {
    int head;
    int tail;
    double weight;
};

// Dense real labeling of the nodes, x[i] for i in 0..N-1.
using GraphSignal = std::vector<double>;

// Entry of the per-node incidence index: the edge and the sign with which
// this node enters it (+1 head, -1 tail).
struct IncidentEdge {
    int edge;
    int sign;
};

/*
 * Oriented weighted graph G = (V, E, W). Nodes are 0..N-1, edges carry a
 * strictly positive weight and a fixed orientation. Immutable after
 * construction; a CSR-style incidence index supports node-parallel gathers.
 */
class WeightedGraph {
  public:
    WeightedGraph(int node_count, std::vector<OrientedEdge> edges);

    int node_count() const { return node_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<OrientedEdge>& edges() const { return edges_; }
    const OrientedEdge& edge(int e) const { return edges_[e]; }

    std::span<const IncidentEdge> incident(int node) const {
        return {incidence_.data() + offsets_[node],
                incidence_.data() + offsets_[node + 1]};
    }

    double total_weight() const { return total_weight_; }

  private:
    int node_count_;
    std::vector<OrientedEdge> edges_;
    std::vector<int> offsets_;
    std::vector<IncidentEdge> incidence_;
    double total_weight_ = 0.0;
};

// Subset of edge indices, kept sorted and unique.
class EdgeSet {
  public:
    EdgeSet() = default;
    explicit EdgeSet(std::vector<int> indices);

    static EdgeSet all(const WeightedGraph& g);

    const std::vector<int>& indices() const { return indices_; }
    std::size_t size() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }
    bool contains(int e) const;

    EdgeSet complement(const WeightedGraph& g) const;
    void validate(const WeightedGraph& g) const;

    // Membership mask over all edges of g.
    std::vector<char> mask(const WeightedGraph& g) const;

  private:
    std::vector<int> indices_;
};

// Result of building a graph from raw id triples: the compacted graph plus
// the id remapping (compacted index -> original id).
struct BuildResult {
    WeightedGraph graph;
    std::vector<std::int64_t> original_ids;
    std::unordered_map<std::int64_t, int> index_of;

    int require_index(std::int64_t original_id) const;
};

struct EdgeTriple {
    std::int64_t u;
    std::int64_t v;
    double weight;
};

// Compacts node ids to 0..N-1 in order of first appearance. The first-listed
// endpoint of each triple becomes the head.
BuildResult build_graph(const std::vector<EdgeTriple>& triples);

}  // namespace nnsp
