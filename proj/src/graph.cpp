#include "nnsp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace nnsp {

WeightedGraph::WeightedGraph(int node_count, std::vector<OrientedEdge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
    if (node_count_ <= 0) throw InvalidSize("node count must be positive");

    std::set<std::pair<int, int>> seen;
    for (const auto& e : edges_) {
        if (e.head < 0 || e.head >= node_count_ || e.tail < 0 ||
            e.tail >= node_count_)
            throw InvalidEdge("edge endpoint out of range");
        if (e.head == e.tail)
            throw SelfLoop("self-loop at node " + std::to_string(e.head));
        if (!(e.weight > 0.0) || !std::isfinite(e.weight))
            throw InvalidWeight("edge weight must be positive and finite");
        auto key = std::minmax(e.head, e.tail);
        if (!seen.insert(key).second)
            throw DuplicateEdge("duplicate edge {" + std::to_string(key.first) +
                                "," + std::to_string(key.second) + "}");
        total_weight_ += e.weight;
    }

    offsets_.assign(node_count_ + 1, 0);
    for (const auto& e : edges_) {
        ++offsets_[e.head + 1];
        ++offsets_[e.tail + 1];
    }
    for (int i = 0; i < node_count_; ++i) offsets_[i + 1] += offsets_[i];
    incidence_.resize(edges_.size() * 2);
    std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
        incidence_[cursor[edges_[e].head]++] = {e, +1};
        incidence_[cursor[edges_[e].tail]++] = {e, -1};
    }
}

EdgeSet::EdgeSet(std::vector<int> indices) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()),
                   indices_.end());
}

EdgeSet EdgeSet::all(const WeightedGraph& g) {
    std::vector<int> idx(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) idx[e] = e;
    return EdgeSet(std::move(idx));
}

bool EdgeSet::contains(int e) const {
    return std::binary_search(indices_.begin(), indices_.end(), e);
}

EdgeSet EdgeSet::complement(const WeightedGraph& g) const {
    validate(g);
    std::vector<int> out;
    out.reserve(g.edge_count() - indices_.size());
    std::size_t k = 0;
    for (int e = 0; e < g.edge_count(); ++e) {
        if (k < indices_.size() && indices_[k] == e) {
            ++k;
        } else {
            out.push_back(e);
        }
    }
    return EdgeSet(std::move(out));
}

void EdgeSet::validate(const WeightedGraph& g) const {
    for (int e : indices_)
        if (e < 0 || e >= g.edge_count())
            throw InvalidEdgeSet("edge index " + std::to_string(e) +
                                 " out of range");
}

std::vector<char> EdgeSet::mask(const WeightedGraph& g) const {
    validate(g);
    std::vector<char> m(g.edge_count(), 0);
    for (int e : indices_) m[e] = 1;
    return m;
}

int BuildResult::require_index(std::int64_t original_id) const {
    auto it = index_of.find(original_id);
    if (it == index_of.end())
        throw InvalidEdge("unknown node id " + std::to_string(original_id));
    return it->second;
}

BuildResult build_graph(const std::vector<EdgeTriple>& triples) {
    std::vector<std::int64_t> ids;
    std::unordered_map<std::int64_t, int> index_of;
    auto intern = [&](std::int64_t id) {
        if (id < 0)
            throw InvalidEdge("node ids must be non-negative, got " +
                              std::to_string(id));
        auto [it, inserted] =
            index_of.emplace(id, static_cast<int>(ids.size()));
        if (inserted) ids.push_back(id);
        return it->second;
    };

    std::vector<OrientedEdge> edges;
    edges.reserve(triples.size());
    for (const auto& t : triples) {
        int head = intern(t.u);
        int tail = intern(t.v);
        edges.push_back({head, tail, t.weight});
    }
    if (ids.empty()) throw InvalidSize("edge list is empty");

    WeightedGraph graph(static_cast<int>(ids.size()), std::move(edges));
    return BuildResult{std::move(graph), std::move(ids), std::move(index_of)};
}

}  // namespace nnsp
