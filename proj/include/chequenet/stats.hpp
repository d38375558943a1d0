#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "chequenet/errors.hpp"
#include "chequenet/network.hpp"
#include "chequenet/rational.hpp"

namespace chequenet {

enum class GraphView { directed, undirected };

// Exact integer basis of the hop-distance summary; the average is a single
// double division so two implementations agreeing on the integers agree on
// the reported value bit-for-bit.
struct PathMetrics {
    std::uint64_t total_hops = 0;
    std::uint64_t reachable_pairs = 0;
    std::uint32_t diameter = 0;

    double average() const {
        return static_cast<double>(total_hops) / static_cast<double>(reachable_pairs);
    }
};

struct PowerLawFit {
    double alpha = 0.0;
    std::size_t sample_count = 0;
    bool degenerate = false; // all samples at the minimum; the fit is formal only
};

struct NetworkStats {
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    double average_degree = 0.0; // 2·E/N on the undirected view
    std::size_t max_in_degree = 0;
    std::size_t max_out_degree = 0;
    bool weakly_connected = false;
    std::size_t component_count = 0;
    std::optional<PathMetrics> paths; // absent when no ordered pair is reachable
    std::optional<PowerLawFit> power_law;
    std::size_t funded_count = 0;
    Cents total_value = 0;
    std::size_t community_count = 0;
};

namespace detail {

inline std::vector<std::vector<NodeId>> undirected_adjacency(const CollateralNetwork& net) {
    std::vector<std::vector<NodeId>> adj(net.node_count());
    for (NodeId v = 0; v < net.node_count(); ++v) {
        for (const EdgeRef& e : net.out_edges(v)) adj[v].push_back(e.peer);
        for (const EdgeRef& e : net.in_edges(v)) adj[v].push_back(e.peer);
        std::sort(adj[v].begin(), adj[v].end());
        adj[v].erase(std::unique(adj[v].begin(), adj[v].end()), adj[v].end());
    }
    return adj;
}

inline uint128 add_path_counts(uint128 a, uint128 b) {
    uint128 s = a + b;
    if (s < a)
        throw infeasible("exact rational overflow: path counts exceed 128-bit range");
    return s;
}

} // namespace detail

// Weak components of the underlying undirected graph. Blocks are sorted by
// their smallest member and each block lists its nodes in ascending order.
inline std::vector<std::vector<NodeId>> connected_components(const CollateralNetwork& net) {
    const std::size_t n = net.node_count();
    auto adj = detail::undirected_adjacency(net);
    std::vector<bool> visited(n, false);
    std::vector<std::vector<NodeId>> blocks;
    for (NodeId s = 0; s < n; ++s) {
        if (visited[s]) continue;
        std::vector<NodeId> block;
        std::queue<NodeId> q;
        visited[s] = true;
        q.push(s);
        while (!q.empty()) {
            NodeId v = q.front();
            q.pop();
            block.push_back(v);
            for (NodeId u : adj[v])
                if (!visited[u]) {
                    visited[u] = true;
                    q.push(u);
                }
        }
        std::sort(block.begin(), block.end());
        blocks.push_back(std::move(block));
    }
    return blocks;
}

inline bool is_weakly_connected(const CollateralNetwork& net) {
    return connected_components(net).size() == 1;
}

// Unweighted directed hop distances over reachable ordered pairs (s ≠ t);
// unreachable pairs are excluded rather than treated as infinite, which is
// what makes the summary finite on a disconnected network.
inline std::optional<PathMetrics> path_metrics(const CollateralNetwork& net) {
    const std::size_t n = net.node_count();
    PathMetrics pm;
    std::vector<std::int32_t> dist(n);
    std::vector<NodeId> frontier;
    for (NodeId s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[s] = 0;
        frontier.assign(1, s);
        std::int32_t level = 0;
        while (!frontier.empty()) {
            std::vector<NodeId> next;
            ++level;
            for (NodeId v : frontier)
                for (const EdgeRef& e : net.out_edges(v))
                    if (dist[e.peer] < 0) {
                        dist[e.peer] = level;
                        next.push_back(e.peer);
                    }
            frontier = std::move(next);
        }
        for (NodeId t = 0; t < n; ++t) {
            if (t == s || dist[t] < 0) continue;
            pm.total_hops += static_cast<std::uint64_t>(dist[t]);
            pm.reachable_pairs += 1;
            pm.diameter = std::max(pm.diameter, static_cast<std::uint32_t>(dist[t]));
        }
    }
    if (pm.reachable_pairs == 0) return std::nullopt;
    return pm;
}

// Shortest-path betweenness C_B(v) = Σ_{s≠v≠t} σ_st(v)/σ_st over ordered
// pairs with σ_st > 0, Brandes-style accumulation on unweighted hops. All
// fractions are carried as exact rationals, so the returned doubles are the
// correctly rounded true values — two exact implementations cannot disagree.
// The undirected view divides by 2 (each unordered pair shows up twice).
inline std::vector<double> betweenness(const CollateralNetwork& net,
                                       GraphView view = GraphView::directed) {
    const std::size_t n = net.node_count();
    std::vector<std::vector<NodeId>> adj(n);
    if (view == GraphView::directed) {
        for (NodeId v = 0; v < n; ++v)
            for (const EdgeRef& e : net.out_edges(v)) adj[v].push_back(e.peer);
    } else {
        adj = detail::undirected_adjacency(net);
    }

    std::vector<detail::Rational> score(n);
    std::vector<std::int32_t> dist(n);
    std::vector<detail::uint128> sigma(n);
    std::vector<std::vector<NodeId>> pred(n);
    std::vector<NodeId> order;
    order.reserve(n);

    for (NodeId s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(sigma.begin(), sigma.end(), 0);
        for (auto& p : pred) p.clear();
        order.clear();

        dist[s] = 0;
        sigma[s] = 1;
        std::queue<NodeId> q;
        q.push(s);
        while (!q.empty()) {
            NodeId v = q.front();
            q.pop();
            order.push_back(v);
            for (NodeId u : adj[v]) {
                if (dist[u] < 0) {
                    dist[u] = dist[v] + 1;
                    q.push(u);
                }
                if (dist[u] == dist[v] + 1) {
                    sigma[u] = detail::add_path_counts(sigma[u], sigma[v]);
                    pred[u].push_back(v);
                }
            }
        }

        std::vector<detail::Rational> delta(n);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            NodeId w = *it;
            for (NodeId v : pred[w]) {
                detail::Rational term = delta[w];
                term += detail::Rational(1, 1);
                delta[v] += detail::Rational(sigma[v], sigma[w]) * term;
            }
            if (w != s) score[w] += delta[w];
        }
    }

    std::vector<double> out(n);
    for (NodeId v = 0; v < n; ++v) {
        detail::Rational r = score[v];
        if (view == GraphView::undirected) r = r * detail::Rational(1, 2);
        out[v] = r.to_double();
    }
    return out;
}

// Maximum-likelihood exponent for samples from a power law with x_min = 1:
// α̂ = 1 + n / Σ ln(x_i / 0.5). Works on both integer degree counts and
// continuous draws; callers guarantee every sample ≥ 1.
inline double power_law_mle(std::span<const double> samples) {
    double log_sum = 0.0;
    for (double x : samples) log_sum += std::log(x / 0.5);
    return 1.0 + static_cast<double>(samples.size()) / log_sum;
}

// Fit over the network's positive in-degrees (edge counts). Fewer than 10
// positive samples is too thin to report, signalled as absent.
inline std::optional<PowerLawFit> power_law_exponent(const CollateralNetwork& net) {
    std::vector<double> samples;
    for (NodeId v = 0; v < net.node_count(); ++v)
        if (!net.in_edges(v).empty())
            samples.push_back(static_cast<double>(net.in_edges(v).size()));
    if (samples.size() < 10) return std::nullopt;
    PowerLawFit fit;
    fit.alpha = power_law_mle(samples);
    fit.sample_count = samples.size();
    fit.degenerate =
        std::all_of(samples.begin(), samples.end(), [&](double x) { return x == samples[0]; });
    return fit;
}

namespace detail {

// One Louvain level: weighted undirected multigraph with self-loops.
// Adjacency stores each edge in both endpoint lists; self_loop holds the
// internal weight once.
struct LouvainLevel {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
    std::vector<double> self_loop;
};

// Greedy modularity sweep in canonical node order. Ties keep the current
// community, then prefer the smallest community label, so the outcome is a
// pure function of the level graph.
inline std::vector<std::uint32_t> louvain_one_level(const LouvainLevel& g, bool& improved) {
    const std::size_t n = g.adj.size();
    std::vector<double> strength(n, 0.0);
    double m2 = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
        double s = 2.0 * g.self_loop[v];
        for (auto& [u, w] : g.adj[v]) s += w;
        strength[v] = s;
        m2 += s;
    }

    std::vector<std::uint32_t> comm(n);
    std::vector<double> comm_total(strength);
    for (std::size_t v = 0; v < n; ++v) comm[v] = static_cast<std::uint32_t>(v);

    improved = false;
    if (m2 <= 0.0) return comm;

    bool moved = true;
    while (moved) {
        moved = false;
        for (std::size_t v = 0; v < n; ++v) {
            std::map<std::uint32_t, double> weight_to;
            for (auto& [u, w] : g.adj[v]) weight_to[comm[u]] += w;

            const std::uint32_t cur = comm[v];
            comm_total[cur] -= strength[v];

            auto gain = [&](std::uint32_t c, double w_vc) {
                return w_vc - strength[v] * comm_total[c] / m2;
            };
            double w_cur = weight_to.count(cur) ? weight_to[cur] : 0.0;
            std::uint32_t best = cur;
            double best_gain = gain(cur, w_cur);
            for (auto& [c, w] : weight_to) {
                if (c == cur) continue;
                double gc = gain(c, w);
                if (gc > best_gain) {
                    best = c;
                    best_gain = gc;
                }
            }

            comm[v] = best;
            comm_total[best] += strength[v];
            if (best != cur) {
                moved = true;
                improved = true;
            }
        }
    }

    // Relabel to dense ids in order of first appearance.
    std::vector<std::uint32_t> relabel(n, static_cast<std::uint32_t>(-1));
    std::uint32_t next = 0;
    for (std::size_t v = 0; v < n; ++v) {
        if (relabel[comm[v]] == static_cast<std::uint32_t>(-1)) relabel[comm[v]] = next++;
        comm[v] = relabel[comm[v]];
    }
    return comm;
}

inline LouvainLevel louvain_aggregate(const LouvainLevel& g,
                                      const std::vector<std::uint32_t>& comm) {
    std::uint32_t k = 0;
    for (std::uint32_t c : comm) k = std::max(k, c + 1);
    LouvainLevel next;
    next.adj.resize(k);
    next.self_loop.assign(k, 0.0);
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> between;
    for (std::size_t v = 0; v < g.adj.size(); ++v) {
        next.self_loop[comm[v]] += g.self_loop[v];
        for (auto& [u, w] : g.adj[v]) {
            if (comm[u] == comm[v])
                next.self_loop[comm[v]] += w / 2.0; // both directions visit it
            else
                between[{comm[v], comm[u]}] += w;
        }
    }
    for (auto& [key, w] : between)
        next.adj[key.first].push_back({key.second, w});
    return next;
}

} // namespace detail

// Louvain-style greedy modularity maximization on the undirected weighted
// projection (edge weight = d_ij + d_ji). Deterministic: node order, tie
// rules and aggregation order are all canonical. Blocks are sorted by their
// smallest member, members ascending.
inline std::vector<std::vector<NodeId>> detect_communities(const CollateralNetwork& net) {
    const std::size_t n = net.node_count();
    detail::LouvainLevel level;
    level.adj.resize(n);
    level.self_loop.assign(n, 0.0);
    for (NodeId v = 0; v < n; ++v) {
        for (const EdgeRef& e : net.out_edges(v)) {
            double w = static_cast<double>(e.value + net.exposure(e.peer, v));
            level.adj[v].push_back({e.peer, w});
            if (net.exposure(e.peer, v) == 0) // avoid double insert for mutual pairs
                level.adj[e.peer].push_back({v, w});
        }
    }
    for (auto& lst : level.adj) std::sort(lst.begin(), lst.end());

    std::vector<std::uint32_t> membership(n);
    for (std::size_t v = 0; v < n; ++v) membership[v] = static_cast<std::uint32_t>(v);

    for (;;) {
        bool improved = false;
        std::vector<std::uint32_t> comm = detail::louvain_one_level(level, improved);
        if (!improved) break;
        for (auto& m : membership) m = comm[m];
        level = detail::louvain_aggregate(level, comm);
    }

    std::uint32_t k = 0;
    for (std::uint32_t c : membership) k = std::max(k, c + 1);
    std::vector<std::vector<NodeId>> blocks(k);
    for (NodeId v = 0; v < n; ++v) blocks[membership[v]].push_back(v);
    std::sort(blocks.begin(), blocks.end(),
              [](const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
                  return a.front() < b.front();
              });
    return blocks;
}

// Full descriptive block: degrees, connectivity, hop metrics, in-degree
// power-law fit and community count, all from the canonical pure reads.
inline NetworkStats network_stats(const CollateralNetwork& net) {
    NetworkStats s;
    s.node_count = net.node_count();
    s.edge_count = net.edge_count();
    s.average_degree = s.node_count > 0
                           ? 2.0 * static_cast<double>(s.edge_count) /
                                 static_cast<double>(s.node_count)
                           : 0.0;
    for (NodeId v = 0; v < net.node_count(); ++v) {
        s.max_in_degree = std::max(s.max_in_degree, net.in_edges(v).size());
        s.max_out_degree = std::max(s.max_out_degree, net.out_edges(v).size());
        if (net.customer(v).funded) ++s.funded_count;
    }
    auto comps = connected_components(net);
    s.component_count = comps.size();
    s.weakly_connected = comps.size() == 1;
    s.paths = path_metrics(net);
    s.power_law = power_law_exponent(net);
    s.total_value = net.total_value();
    s.community_count = detect_communities(net).size();
    return s;
}

} // namespace chequenet
