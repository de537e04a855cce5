#include "nnsp/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "nnsp/errors.hpp"
#include "nnsp/rng.hpp"

namespace nnsp {

SamplingSet::SamplingSet(std::vector<int> nodes) : nodes_(std::move(nodes)) {
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
}

bool SamplingSet::contains(int node) const {
    return std::binary_search(nodes_.begin(), nodes_.end(), node);
}

std::vector<char> SamplingSet::mask(int node_count) const {
    std::vector<char> m(node_count, 0);
    for (int v : nodes_) m[v] = 1;
    return m;
}

void SamplingSet::validate(const WeightedGraph& g) const {
    for (int v : nodes_)
        if (v < 0 || v >= g.node_count())
            throw InvalidEdge("sampled node " + std::to_string(v) +
                              " out of range");
}

SamplingSet per_cluster(const Partition& part, PerClusterRule rule) {
    auto groups = part.members();  // each group ascending by construction
    std::vector<int> picked;
    picked.reserve(groups.size());
    for (const auto& grp : groups) {
        if (grp.empty())
            throw PartitionMismatch("empty cluster in per-cluster sampling");
        if (rule == PerClusterRule::LowestId)
            picked.push_back(grp.front());
        else
            picked.push_back(grp[(grp.size() - 1) / 2]);  // lower median
    }
    return SamplingSet(std::move(picked));
}

SamplingSet boundary_adjacent(const WeightedGraph& g, const Partition& part) {
    EdgeSet b = boundary(g, part);
    std::vector<int> nodes;
    nodes.reserve(2 * b.size());
    for (int e : b.indices()) {
        nodes.push_back(g.edge(e).head);
        nodes.push_back(g.edge(e).tail);
    }
    return SamplingSet(std::move(nodes));
}

SamplingSet uniform_random(int n_nodes, int m, std::uint64_t seed) {
    if (m < 1 || m > n_nodes)
        throw InvalidBudget("cannot sample " + std::to_string(m) +
                            " of " + std::to_string(n_nodes) + " nodes");
    // Partial Fisher-Yates: after m swaps the prefix holds a uniform
    // m-subset in random order.
    std::vector<int> pool(n_nodes);
    std::iota(pool.begin(), pool.end(), 0);
    SplitMix64 rng(seed);
    for (int i = 0; i < m; ++i) {
        std::uint64_t j = i + rng.next_below(n_nodes - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(m);
    return SamplingSet(std::move(pool));
}

}  // namespace nnsp
