#pragma once

#include <cstdint>
#include <vector>

#include "nnsp/graph.hpp"
#include "nnsp/partition.hpp"

namespace nnsp {

// Set of sampled nodes, sorted and unique. May be empty as a value;
// operations that need samples reject empty sets.
class SamplingSet {
  public:
    SamplingSet() = default;
    explicit SamplingSet(std::vector<int> nodes);

    const std::vector<int>& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }
    bool contains(int node) const;

    std::vector<char> mask(int node_count) const;
    void validate(const WeightedGraph& g) const;

  private:
    std::vector<int> nodes_;
};

enum class PerClusterRule { Middle, LowestId };

// Exactly one node per cluster: the lower-median node id or the minimum id.
SamplingSet per_cluster(const Partition& part, PerClusterRule rule);

// Endpoints of the boundary edges. Empty iff the boundary is empty.
SamplingSet boundary_adjacent(const WeightedGraph& g, const Partition& part);

// m distinct nodes drawn without replacement from a splitmix64 stream.
SamplingSet uniform_random(int n_nodes, int m, std::uint64_t seed);

// Generator identity recorded in reports for reproducibility.
inline constexpr const char* kGeneratorName = "splitmix64";

}  // namespace nnsp
