#include "nnsp/flow.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <utility>

#include "nnsp/kernels.hpp"
#include "nnsp/rng.hpp"

namespace nnsp {

namespace {

// Residuals below this are treated as exhausted arcs during augmentation.
constexpr double kArcEps = 1e-12;

/*
 * Dinic max-flow over real capacities. Arcs are stored in creation order and
 * scanned in that order by both BFS and DFS, so runs are reproducible. Arc i
 * and i^1 form a residual pair; an undirected edge is one pair with equal
 * capacity on both sides, whose net flow is cap - residual of the forward
 * side.
 */
class Dinic {
  public:
    explicit Dinic(int n) : adj_(n), level_(n), iter_(n) {}

    int add_arc(int from, int to, double cap, double back_cap = 0.0) {
        int id = static_cast<int>(to_.size());
        to_.push_back(to);
        cap_.push_back(cap);
        adj_[from].push_back(id);
        to_.push_back(from);
        cap_.push_back(back_cap);
        adj_[to].push_back(id + 1);
        return id;
    }

    double residual(int arc) const { return cap_[arc]; }

    double max_flow(int s, int t) {
        double total = 0.0;
        while (bfs(s, t)) {
            std::fill(iter_.begin(), iter_.end(), 0);
            while (true) {
                double pushed =
                    dfs(s, t, std::numeric_limits<double>::infinity());
                if (pushed <= kArcEps) break;
                total += pushed;
            }
        }
        return total;
    }

  private:
    bool bfs(int s, int t) {
        std::fill(level_.begin(), level_.end(), -1);
        std::queue<int> q;
        level_[s] = 0;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int a : adj_[u]) {
                if (cap_[a] > kArcEps && level_[to_[a]] < 0) {
                    level_[to_[a]] = level_[u] + 1;
                    q.push(to_[a]);
                }
            }
        }
        return level_[t] >= 0;
    }

    double dfs(int u, int t, double pushed) {
        if (u == t) return pushed;
        for (int& i = iter_[u]; i < static_cast<int>(adj_[u].size()); ++i) {
            int a = adj_[u][i];
            int v = to_[a];
            if (cap_[a] <= kArcEps || level_[v] != level_[u] + 1) continue;
            double got = dfs(v, t, std::min(pushed, cap_[a]));
            if (got > kArcEps) {
                cap_[a] -= got;
                cap_[a ^ 1] += got;
                return got;
            }
        }
        level_[u] = -1;  // dead end for this phase
        return 0.0;
    }

    std::vector<std::vector<int>> adj_;
    std::vector<int> to_;
    std::vector<double> cap_;
    std::vector<int> level_, iter_;
};

std::vector<double> divergence(const WeightedGraph& g,
                               const std::vector<double>& edge_flow) {
    std::vector<double> d(g.node_count(), 0.0);
    for (int e = 0; e < g.edge_count(); ++e) {
        d[g.edge(e).head] += edge_flow[e];
        d[g.edge(e).tail] -= edge_flow[e];
    }
    return d;
}

}  // namespace

std::optional<FlowAssignment> flow_feasible(
    const WeightedGraph& g, const std::vector<std::pair<int, double>>& fixed,
    const SamplingSet& free_nodes, double saturation_tol) {
    if (free_nodes.empty())
        throw EmptySamplingSet("flow feasibility needs at least one free node");
    free_nodes.validate(g);

    const int n = g.node_count();
    const int m = g.edge_count();

    std::vector<char> is_fixed(m, 0);
    std::vector<double> fixed_val(m, 0.0);
    double fixed_mass = 0.0;
    for (const auto& [e, v] : fixed) {
        if (e < 0 || e >= m)
            throw InvalidEdge("fixed edge " + std::to_string(e) +
                              " out of range");
        if (is_fixed[e])
            throw InvalidEdge("edge " + std::to_string(e) + " fixed twice");
        if (!std::isfinite(v))
            throw InvalidWeight("fixed flow value must be finite");
        is_fixed[e] = 1;
        fixed_val[e] = v;
        fixed_mass += std::abs(v);
    }

    // Residual demands after deleting the fixed edges: the interior flow must
    // replace exactly what the fixed values unbalance, except at free nodes
    // where any demand is allowed (the super node absorbs it).
    const std::vector<char> is_free = free_nodes.mask(n);
    std::vector<double> delta(n + 1, 0.0);  // last slot: super node
    for (int e = 0; e < m; ++e) {
        if (!is_fixed[e]) continue;
        delta[g.edge(e).head] -= fixed_val[e];
        delta[g.edge(e).tail] += fixed_val[e];
    }
    double uncovered = 0.0;
    for (int i = 0; i < n; ++i) {
        if (is_free[i])
            delta[i] = 0.0;
        else
            uncovered += delta[i];
    }
    delta[n] = -uncovered;

    const int super = n, source = n + 1, sink = n + 2;
    const double big = fixed_mass + g.total_weight() + 1.0;

    Dinic net(n + 3);
    std::vector<int> edge_arc(m, -1);
    for (int e = 0; e < m; ++e) {
        if (is_fixed[e]) continue;
        const auto& ed = g.edge(e);
        // Forward side tail->head so positive net flow matches the sign
        // convention of the conservation law.
        edge_arc[e] = net.add_arc(ed.tail, ed.head, ed.weight, ed.weight);
    }
    for (int v : free_nodes.nodes()) net.add_arc(v, super, big, big);

    std::vector<int> source_arcs;
    for (int u = 0; u <= n; ++u) {
        if (delta[u] < 0.0)
            source_arcs.push_back(net.add_arc(source, u, -delta[u]));
        else if (delta[u] > 0.0)
            net.add_arc(u, sink, delta[u]);
    }

    net.max_flow(source, sink);
    for (int a : source_arcs)
        if (net.residual(a) > saturation_tol) return std::nullopt;

    FlowAssignment out;
    out.edge_flow.resize(m);
    for (int e = 0; e < m; ++e)
        out.edge_flow[e] = is_fixed[e]
                               ? fixed_val[e]
                               : g.edge(e).weight - net.residual(edge_arc[e]);
    out.node_demand = divergence(g, out.edge_flow);
    return out;
}

namespace {

Signature signature_at(std::uint64_t k, int boundary_size) {
    // Position 0 pinned to +1 (global-flip representative); the remaining
    // positions read the bits of k, set bit = -1.
    Signature sig;
    sig.signs.resize(boundary_size);
    for (int j = 0; j < boundary_size; ++j)
        sig.signs[j] = (j == 0) ? 1 : (((k >> (j - 1)) & 1u) ? -1 : 1);
    return sig;
}

std::vector<std::pair<int, double>> boundary_values(const WeightedGraph& g,
                                                    const EdgeSet& b,
                                                    const Signature& sig,
                                                    double kappa) {
    std::vector<std::pair<int, double>> fx(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) {
        int e = b.indices()[j];
        fx[j] = {e, kappa * sig.signs[j] * g.edge(e).weight};
    }
    return fx;
}

}  // namespace

Certificate certify_nnsp(const WeightedGraph& g, const Partition& part,
                         const SamplingSet& samples, double kappa,
                         const CertifyOptions& opts) {
    part.validate(g);
    samples.validate(g);
    if (samples.empty())
        throw EmptySamplingSet("certification needs a non-empty sampling set");
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw InvalidWeight("kappa must be positive and finite");

    Certificate cert;
    cert.kappa = kappa;
    cert.below_threshold = (kappa <= 1.0);
    cert.boundary = boundary(g, part);
    const int B = static_cast<int>(cert.boundary.size());
    if (B > opts.signature_cap)
        throw BoundaryTooLarge("boundary has " + std::to_string(B) +
                               " edges, cap is " +
                               std::to_string(opts.signature_cap));

    if (B == 0) {
        // Single empty signature; the zero flow is its witness.
        auto flow = flow_feasible(g, {}, samples, opts.saturation_tol);
        cert.certified = true;
        cert.checked = 1;
        cert.signatures = {Signature{}};
        cert.witnesses = {std::move(*flow)};
        return cert;
    }

    const std::uint64_t total = std::uint64_t(1) << (B - 1);
    std::vector<FlowAssignment> wit(total);
    std::atomic<std::uint64_t> best_fail{total};

    // Checks are independent; a found failure prunes everything after it.
    // Skipping is safe: k is only skipped when a strictly smaller failure is
    // already known, so the lowest failing index is exact.
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(total); ++k) {
        std::uint64_t kk = static_cast<std::uint64_t>(k);
        if (kk > best_fail.load(std::memory_order_relaxed)) continue;
        Signature sig = signature_at(kk, B);
        auto flow = flow_feasible(g, boundary_values(g, cert.boundary, sig, kappa),
                                  samples, opts.saturation_tol);
        if (flow) {
            wit[kk] = std::move(*flow);
        } else {
            std::uint64_t cur = best_fail.load();
            while (kk < cur && !best_fail.compare_exchange_weak(cur, kk)) {
            }
        }
    }

    std::uint64_t fail = best_fail.load();
    if (fail < total) {
        cert.certified = false;
        cert.failing_index = fail;
        cert.failing_signature = signature_at(fail, B);
        cert.checked = static_cast<std::size_t>(fail) + 1;
        return cert;
    }

    cert.certified = true;
    cert.checked = total;
    cert.signatures.reserve(total);
    for (std::uint64_t k = 0; k < total; ++k)
        cert.signatures.push_back(signature_at(k, B));
    cert.witnesses = std::move(wit);
    for (std::uint64_t k = 0; k < total; ++k) {
        auto fx = boundary_values(g, cert.boundary, cert.signatures[k], kappa);
        if (!verify_flow(g, cert.witnesses[k], fx, samples))
            throw Error("internal: certificate witness failed verification");
    }
    return cert;
}

double max_kappa(const WeightedGraph& g, const Partition& part,
                 const SamplingSet& samples, const CertifyOptions& opts) {
    constexpr double kDoublingCap = 1048576.0;  // 2^20

    part.validate(g);
    EdgeSet b = boundary(g, part);
    if (static_cast<int>(b.size()) > opts.signature_cap)
        throw BoundaryTooLarge("boundary has " + std::to_string(b.size()) +
                               " edges, cap is " +
                               std::to_string(opts.signature_cap));
    if (b.empty()) return kDoublingCap;  // nothing to refute at any kappa

    auto certified = [&](double k) {
        return certify_nnsp(g, part, samples, k, opts).certified;
    };

    double lo = 0.0, hi = 1.0;  // kappa -> 0 is always feasible (zero flows)
    if (certified(1.0)) {
        lo = 1.0;
        while (true) {
            if (lo >= kDoublingCap) return kDoublingCap;
            double next = 2.0 * lo;
            if (certified(next)) {
                lo = next;
            } else {
                hi = next;
                break;
            }
        }
    }
    while (hi - lo > 1e-3) {
        double mid = 0.5 * (lo + hi);
        if (certified(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

namespace {

// Indicators of connected components, computed over an adjacency filter.
// Components are discovered in ascending order of their smallest node.
template <typename EdgeOk, typename NodeOk>
std::vector<GraphSignal> component_indicators(const WeightedGraph& g,
                                              EdgeOk edge_ok, NodeOk node_ok) {
    const int n = g.node_count();
    std::vector<char> seen(n, 0);
    std::vector<GraphSignal> out;
    for (int start = 0; start < n; ++start) {
        if (seen[start] || !node_ok(start)) continue;
        GraphSignal ind(n, 0.0);
        std::queue<int> q;
        seen[start] = 1;
        q.push(start);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            ind[u] = 1.0;
            for (const auto& inc : g.incident(u)) {
                if (!edge_ok(inc.edge)) continue;
                const auto& ed = g.edge(inc.edge);
                int v = (ed.head == u) ? ed.tail : ed.head;
                if (!seen[v] && node_ok(v)) {
                    seen[v] = 1;
                    q.push(v);
                }
            }
        }
        out.push_back(std::move(ind));
    }
    return out;
}

}  // namespace

NspReport empirical_nsp_check(const WeightedGraph& g, const EdgeSet& s,
                              const SamplingSet& samples, double kappa,
                              int trials, std::uint64_t seed) {
    if (trials < 1) throw InvalidSize("need at least one trial");
    s.validate(g);
    samples.validate(g);

    const int n = g.node_count();
    const std::vector<char> on_m = samples.mask(n);
    const std::vector<char> in_s = s.mask(g);
    const EdgeSet off_s = s.complement(g);

    NspReport rep;
    auto consider = [&](GraphSignal u) {
        double on = tv_restricted(g, u, s);
        double off = tv_restricted(g, u, off_s);
        ++rep.checked;
        if (off < kappa * on - 1e-9)
            rep.violations.push_back(NspViolation{std::move(u), off, on});
    };

    SplitMix64 rng(seed);
    GraphSignal u(n);
    for (int t = 0; t < trials; ++t) {
        for (int i = 0; i < n; ++i) u[i] = on_m[i] ? 0.0 : rng.next_normal();
        consider(u);
    }

    // Adversarial candidates: indicators of the components left when the
    // edges of S are cut, then of the components of V minus the samples;
    // all zeroed on the samples so they live in the kernel.
    auto zero_on_m = [&](GraphSignal v) {
        for (int i = 0; i < n; ++i)
            if (on_m[i]) v[i] = 0.0;
        return v;
    };
    for (auto& ind : component_indicators(
             g, [&](int e) { return !in_s[e]; }, [](int) { return true; }))
        consider(zero_on_m(std::move(ind)));
    for (auto& ind : component_indicators(
             g, [](int) { return true; },
             [&](int i) { return !on_m[i]; }))
        consider(zero_on_m(std::move(ind)));

    return rep;
}

bool verify_flow(const WeightedGraph& g, const FlowAssignment& f,
                 const std::vector<std::pair<int, double>>& fixed,
                 const SamplingSet& free_nodes, double conservation_tol,
                 double capacity_tol) {
    const int n = g.node_count();
    const int m = g.edge_count();
    if (static_cast<int>(f.edge_flow.size()) != m) return false;
    if (static_cast<int>(f.node_demand.size()) != n) return false;

    std::vector<char> is_fixed(m, 0);
    std::vector<double> fixed_val(m, 0.0);
    for (const auto& [e, v] : fixed) {
        if (e < 0 || e >= m) return false;
        is_fixed[e] = 1;
        fixed_val[e] = v;
    }
    for (int e = 0; e < m; ++e) {
        if (is_fixed[e]) {
            if (std::abs(f.edge_flow[e] - fixed_val[e]) > capacity_tol)
                return false;
        } else if (std::abs(f.edge_flow[e]) > g.edge(e).weight + capacity_tol) {
            return false;
        }
    }

    const std::vector<double> div = divergence(g, f.edge_flow);
    const std::vector<char> is_free = free_nodes.mask(n);
    for (int i = 0; i < n; ++i) {
        if (std::abs(div[i] - f.node_demand[i]) > conservation_tol)
            return false;
        if (!is_free[i] && std::abs(div[i]) > conservation_tol) return false;
    }
    return true;
}

}  // namespace nnsp
