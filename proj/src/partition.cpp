#include "nnsp/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <string>

#include "nnsp/kernels.hpp"

namespace nnsp {

void Partition::validate(const WeightedGraph& g) const {
    if (static_cast<int>(cluster_of.size()) != g.node_count())
        throw PartitionMismatch("partition covers " +
                                std::to_string(cluster_of.size()) +
                                " nodes, graph has " +
                                std::to_string(g.node_count()));
    if (cluster_count <= 0)
        throw PartitionMismatch("cluster count must be positive");
    std::vector<char> seen(cluster_count, 0);
    for (int c : cluster_of) {
        if (c < 0 || c >= cluster_count)
            throw PartitionMismatch("cluster id " + std::to_string(c) +
                                    " out of range");
        seen[c] = 1;
    }
    for (int l = 0; l < cluster_count; ++l)
        if (!seen[l])
            throw PartitionMismatch("cluster " + std::to_string(l) +
                                    " is empty");
}

std::vector<std::vector<int>> Partition::members() const {
    std::vector<std::vector<int>> out(cluster_count);
    for (int i = 0; i < static_cast<int>(cluster_of.size()); ++i)
        out[cluster_of[i]].push_back(i);
    return out;
}

EdgeSet boundary(const WeightedGraph& g, const Partition& part) {
    part.validate(g);
    std::vector<int> idx;
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto& ed = g.edge(e);
        if (part.cluster_of[ed.head] != part.cluster_of[ed.tail])
            idx.push_back(e);
    }
    return EdgeSet(std::move(idx));
}

GraphSignal clustered_signal(const WeightedGraph& g, const Partition& part,
                             const ClusterCoefficients& coeffs) {
    part.validate(g);
    if (static_cast<int>(coeffs.a.size()) != part.cluster_count)
        throw DimensionMismatch("coefficient count " +
                                std::to_string(coeffs.a.size()) + " vs " +
                                std::to_string(part.cluster_count) +
                                " clusters");
    GraphSignal x(g.node_count());
    for (int i = 0; i < g.node_count(); ++i) x[i] = coeffs.a[part.cluster_of[i]];
    return x;
}

Partition geodesic_partition(const WeightedGraph& g,
                             const std::vector<int>& centers) {
    if (centers.empty()) throw InvalidSize("no cluster centers");
    std::set<int> distinct;
    for (int c : centers) {
        if (c < 0 || c >= g.node_count())
            throw InvalidEdge("center " + std::to_string(c) + " out of range");
        if (!distinct.insert(c).second)
            throw DuplicateCenter("center " + std::to_string(c) + " repeated");
    }

    const int n = g.node_count();
    std::vector<int> best_dist(n, -1);
    std::vector<int> best_center(n, -1);

    // One BFS per center; lowest center index wins ties. Center counts stay
    // tiny in the experiments, so the k passes are cheaper than bookkeeping
    // a joint frontier.
    std::vector<int> dist(n);
    for (int k = 0; k < static_cast<int>(centers.size()); ++k) {
        std::fill(dist.begin(), dist.end(), -1);
        std::queue<int> q;
        dist[centers[k]] = 0;
        q.push(centers[k]);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (const auto& inc : g.incident(u)) {
                const auto& ed = g.edge(inc.edge);
                int v = (ed.head == u) ? ed.tail : ed.head;
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    q.push(v);
                }
            }
        }
        for (int i = 0; i < n; ++i) {
            if (dist[i] < 0) continue;
            if (best_dist[i] < 0 || dist[i] < best_dist[i]) {
                best_dist[i] = dist[i];
                best_center[i] = k;
            }
        }
    }

    for (int i = 0; i < n; ++i)
        if (best_center[i] < 0)
            throw DisconnectedGraph("node " + std::to_string(i) +
                                    " unreachable from every center");

    return Partition{std::move(best_center),
                     static_cast<int>(centers.size())};
}

/*
 * Boundary edge e couples the coefficients of its two clusters through
 * W_e * |d_e - (a_head - a_tail)| with d_e the signal difference across e.
 * Two passes: cyclic coordinate descent (each coordinate's optimum is a
 * weighted median of per-edge targets), then an exact search. The boundary
 * part is piecewise linear in a, so some minimizer makes the tight terms
 * contain a spanning tree of the quotient graph; when the number of
 * candidate trees is small we enumerate them all, which rescues the
 * descent from tie plateaus (ties are common on integer-valued signals).
 */
BestClusteredFit best_clustered_tv(const WeightedGraph& g,
                                   const Partition& part,
                                   const GraphSignal& x) {
    part.validate(g);
    if (static_cast<int>(x.size()) != g.node_count())
        throw DimensionMismatch("signal length vs node count");

    const int f = part.cluster_count;

    // Start from per-cluster means; for an exactly clustered x this is the
    // generator and the descent exits immediately.
    std::vector<double> a(f, 0.0);
    std::vector<int> count(f, 0);
    for (int i = 0; i < g.node_count(); ++i) {
        a[part.cluster_of[i]] += x[i];
        ++count[part.cluster_of[i]];
    }
    for (int l = 0; l < f; ++l) a[l] /= count[l];
    const double gauge = a[0];

    EdgeSet bset = boundary(g, part);
    struct BTerm {
        int edge;
        int c_head;
        int c_tail;
        double diff;  // x[head] - x[tail]
    };
    std::vector<BTerm> terms;
    std::vector<std::vector<int>> by_cluster(f);
    for (int e : bset.indices()) {
        const auto& ed = g.edge(e);
        BTerm t{e, part.cluster_of[ed.head], part.cluster_of[ed.tail],
                x[ed.head] - x[ed.tail]};
        by_cluster[t.c_head].push_back(static_cast<int>(terms.size()));
        by_cluster[t.c_tail].push_back(static_cast<int>(terms.size()));
        terms.push_back(t);
    }

    auto objective_for = [&](const std::vector<double>& coef) {
        double acc = 0.0;
        for (const auto& t : terms)
            acc += g.edge(t.edge).weight *
                   std::abs(t.diff - (coef[t.c_head] - coef[t.c_tail]));
        return acc;
    };
    auto objective = [&]() { return objective_for(a); };

    std::vector<std::pair<double, double>> targets;  // (value, weight)
    double obj = objective();
    const int max_cycles = 10 * f;
    for (int cycle = 0; cycle < max_cycles; ++cycle) {
        for (int l = 1; l < f; ++l) {  // a[0] pinned: gauge freedom
            if (by_cluster[l].empty()) continue;
            targets.clear();
            for (int ti : by_cluster[l]) {
                const auto& t = terms[ti];
                double w = g.edge(t.edge).weight;
                if (t.c_head == l && t.c_tail == l) continue;
                if (t.c_head == l)
                    targets.emplace_back(a[t.c_tail] + t.diff, w);
                else
                    targets.emplace_back(a[t.c_head] - t.diff, w);
            }
            if (targets.empty()) continue;
            std::sort(targets.begin(), targets.end());
            double total = 0.0;
            for (const auto& [v, w] : targets) total += w;
            double half = total / 2.0, cum = 0.0;
            for (const auto& [v, w] : targets) {
                cum += w;
                if (cum >= half) {
                    a[l] = v;
                    break;
                }
            }
        }
        double next = objective();
        if (obj - next < 1e-9) {
            obj = next;
            break;
        }
        obj = next;
    }

    // Exact pass: enumerate (f-1)-subsets of boundary terms; each subset
    // that forms a spanning tree of the quotient pins the coefficients by
    // propagating the signal differences along it. Strict improvement only,
    // so exact descent results (and their coefficients) are kept.
    const int m = static_cast<int>(terms.size());
    const int k = f - 1;
    if (k >= 1 && m >= k) {
        double count = 1.0;
        for (int i = 0; i < k; ++i) count *= double(m - i) / double(i + 1);
        if (count <= 200000.0) {
            std::vector<int> pick(k);
            std::iota(pick.begin(), pick.end(), 0);
            std::vector<std::vector<int>> adj(f);
            std::vector<double> cand(f);
            std::vector<char> seen(f);
            std::vector<int> stack;
            while (true) {
                for (auto& v : adj) v.clear();
                for (int ti : pick) {
                    adj[terms[ti].c_head].push_back(ti);
                    adj[terms[ti].c_tail].push_back(ti);
                }
                std::fill(seen.begin(), seen.end(), 0);
                std::fill(cand.begin(), cand.end(), 0.0);
                seen[0] = 1;
                stack.assign(1, 0);
                int reached = 1;
                while (!stack.empty()) {
                    int u = stack.back();
                    stack.pop_back();
                    for (int ti : adj[u]) {
                        const auto& t = terms[ti];
                        int v = (t.c_head == u) ? t.c_tail : t.c_head;
                        if (seen[v]) continue;
                        seen[v] = 1;
                        cand[v] = (t.c_head == u) ? cand[u] - t.diff
                                                  : cand[u] + t.diff;
                        stack.push_back(v);
                        ++reached;
                    }
                }
                if (reached == f) {
                    double cobj = objective_for(cand);
                    if (cobj < obj) {
                        obj = cobj;
                        a = cand;
                    }
                }
                int i = k - 1;
                while (i >= 0 && pick[i] == m - k + i) --i;
                if (i < 0) break;
                ++pick[i];
                for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
            }
        }
    }

    // Re-pin the gauge; the objective only sees coefficient differences.
    double shift = gauge - a[0];
    for (double& al : a) al += shift;

    // Value = a-independent interior part + optimized boundary part.
    ClusterCoefficients coeffs{a};
    GraphSignal fitted = clustered_signal(g, part, coeffs);
    GraphSignal residual(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) residual[i] = x[i] - fitted[i];
    return BestClusteredFit{std::move(coeffs), tv(g, residual)};
}

GeneratedInstance chain_graph_experiment(int n, int clusters, double w_in,
                                         double w_out,
                                         const std::vector<double>& coeff_cycle) {
    if (n <= 0 || clusters <= 0 || n % clusters != 0)
        throw IndivisibleClusterSize(std::to_string(n) + " nodes cannot form " +
                                     std::to_string(clusters) +
                                     " equal clusters");
    if (coeff_cycle.empty()) throw InvalidSize("empty coefficient cycle");

    const int per = n / clusters;
    std::vector<EdgeTriple> triples;
    triples.reserve(n - 1);
    for (int i = 1; i < n; ++i) {
        bool crossing = (i % per == 0);
        triples.push_back({i, i + 1, crossing ? w_out : w_in});
    }
    BuildResult built = build_graph(triples);

    Partition part;
    part.cluster_count = clusters;
    part.cluster_of.resize(n);
    for (int i = 0; i < n; ++i) part.cluster_of[i] = i / per;

    ClusterCoefficients coeffs;
    coeffs.a.resize(clusters);
    for (int l = 0; l < clusters; ++l)
        coeffs.a[l] = coeff_cycle[l % coeff_cycle.size()];

    GraphSignal sig = clustered_signal(built.graph, part, coeffs);
    return GeneratedInstance{std::move(built), std::move(part),
                             std::move(sig)};
}

GeneratedInstance two_cluster_chain(int n, double delta) {
    if (n < 4 || n % 2 != 0)
        throw InvalidSize("need an even chain of at least 4 nodes");
    if (!(delta > 0.0)) throw InvalidWeight("delta must be positive");

    std::vector<EdgeTriple> triples;
    triples.reserve(n - 1);
    for (int i = 1; i < n; ++i)
        triples.push_back({i, i + 1, (i == n / 2) ? 1.0 / delta : 1.0});
    BuildResult built = build_graph(triples);

    Partition part;
    part.cluster_count = 2;
    part.cluster_of.resize(n);
    for (int i = 0; i < n; ++i) part.cluster_of[i] = (i < n / 2) ? 0 : 1;

    GraphSignal sig = clustered_signal(built.graph, part,
                                       ClusterCoefficients{{1.0, 2.0}});
    return GeneratedInstance{std::move(built), std::move(part),
                             std::move(sig)};
}

}  // namespace nnsp
