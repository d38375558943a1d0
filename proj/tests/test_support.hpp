#pragma once

// Fixtures and independent oracles shared by the test suites. The oracles
// deliberately avoid the library's data structures and algorithms: they work
// on plain edge triples with their own arithmetic, so agreement with the
// library is evidence, not tautology.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "chequenet/chequenet.hpp"

namespace testsupport {

using EdgeTriple = std::tuple<std::string, std::string, long long>;

// xorshift64*: a deliberately different generator from the library's.
struct TestRng {
    std::uint64_t state;
    explicit TestRng(std::uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next() {
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        return state * 0x2545f4914f6cdd1dULL;
    }
    std::uint64_t below(std::uint64_t bound) { return bound ? next() % bound : 0; }
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

inline std::vector<chequenet::Cheque> cheques_from(const std::vector<EdgeTriple>& edges) {
    std::vector<chequenet::Cheque> cheques;
    std::size_t serial = 0;
    for (const auto& [from, to, cents] : edges) {
        chequenet::Cheque c;
        c.cheque_id = "T" + std::to_string(serial++);
        c.issuer_id = from;
        c.recipient_id = to;
        c.value = cents;
        cheques.push_back(std::move(c));
    }
    return cheques;
}

inline chequenet::CollateralNetwork make_network(const std::vector<EdgeTriple>& edges) {
    return chequenet::ingest_cheques(cheques_from(edges));
}

// Six-node walkthrough (V = 10000 cents): weights 0.20 / 0.12 / 0.20 / 0.30 /
// 0.10 / 0.08; at c = 0.5 seeding {1} fails {1} -> {2} -> {4} with node 6
// surviving and a 70% uniform loss.
inline std::vector<EdgeTriple> six_node_edges() {
    return {
        {"1", "2", 2000}, {"5", "2", 1200}, {"1", "4", 2000},
        {"2", "4", 3000}, {"5", "6", 1000}, {"3", "6", 800},
    };
}

// Ranking fixture (V = 100000 cents) with three engineered cascades:
//   1005: stage losses 5.11% then 7.15%  -> uniform 12.26, adjusted 4.3425
//   1029: stage losses 4.41/4.27/0.21    -> uniform  8.89, adjusted 3.29875
//   1011: stage loss  7.15%              -> uniform  7.15, adjusted 3.575
// Everyone else stays below, so the top three flip order between the uniform
// and the adjusted metric (1029 vs 1011).
inline std::vector<EdgeTriple> rank_fixture_edges() {
    std::vector<EdgeTriple> edges = {
        // cascade A: 1005 -> {a1, a1b} -> a2 (a2 protected by filler inflow)
        {"1005", "a1", 2000},
        {"1005", "a1b", 3110},
        {"a1", "a2", 3000},
        {"a1b", "a2", 4150},
        // cascade B: 1029 -> b1 -> b2 -> (b3 survives: 210/422 < 1/2)
        {"1029", "b1", 4410},
        {"b1", "b2", 4270},
        {"b2", "b3", 210},
        {"g1", "b3", 106},
        {"g2", "b3", 106},
        // cascade C: 1011 -> (c1 survives: 7150·2 = 14300 < 14302)
        {"1011", "c1", 7150},
        {"h1", "c1", 3576},
        {"h2", "c1", 3576},
        // fillers into a2 keep its threshold high; each is harmless alone
        {"z01", "a2", 3576},
        {"z02", "a2", 3576},
    };
    for (int i = 3; i <= 11; ++i) {
        char id[8];
        std::snprintf(id, sizeof(id), "z%02d", i);
        edges.push_back({id, "a2", 6000});
    }
    edges.push_back({"z12", "a2", 3184});
    return edges;
}

// Random sparse digraph for property and oracle tests: ids are zero-padded,
// no self-edges, values in [1, 10000].
inline std::vector<EdgeTriple> random_edges(TestRng& rng, std::size_t nodes,
                                            std::size_t edge_count) {
    assert(nodes >= 2);
    std::size_t width = std::to_string(nodes).size();
    auto id_of = [&](std::size_t i) {
        std::string s = std::to_string(i + 1);
        if (s.size() < width) s.insert(0, width - s.size(), '0');
        return s;
    };
    std::vector<EdgeTriple> edges;
    for (std::size_t e = 0; e < edge_count; ++e) {
        std::size_t from = rng.below(nodes);
        std::size_t to = rng.below(nodes);
        while (to == from) to = rng.below(nodes);
        edges.push_back({id_of(from), id_of(to), 1 + static_cast<long long>(rng.below(10000))});
    }
    return edges;
}

inline std::vector<std::string> node_ids(const std::vector<EdgeTriple>& edges) {
    std::set<std::string> ids;
    for (const auto& [from, to, cents] : edges) {
        ids.insert(from);
        ids.insert(to);
    }
    return {ids.begin(), ids.end()};
}

// ---------------------------------------------------------------------------
// Cascade oracle: recompute-until-stable over raw edge triples.

struct NaiveCascade {
    std::vector<std::set<std::string>> stage_sets;
    std::set<std::string> failed;
    long long loss_cents = 0;
};

inline NaiveCascade naive_cascade(const std::vector<EdgeTriple>& edges, int c_bp,
                                  const std::set<std::string>& seeds) {
    std::map<std::string, long long> in_sum, out_sum;
    for (const auto& [from, to, cents] : edges) {
        in_sum[to] += cents;
        out_sum[from] += cents;
    }
    NaiveCascade result;
    result.failed = seeds;
    result.stage_sets.push_back(seeds);
    for (;;) {
        std::set<std::string> next;
        for (const std::string& j : node_ids(edges)) {
            if (result.failed.count(j)) continue;
            long long defaulted = 0;
            for (const auto& [from, to, cents] : edges)
                if (to == j && result.failed.count(from)) defaulted += cents;
            if (defaulted <= 0) continue;
            __int128 lhs = static_cast<__int128>(defaulted) * 10000;
            __int128 rhs = static_cast<__int128>(c_bp) * in_sum[j];
            if (lhs >= rhs) next.insert(j);
        }
        if (next.empty()) break;
        result.stage_sets.push_back(next);
        for (const std::string& j : next) result.failed.insert(j);
    }
    for (const std::string& j : result.failed) result.loss_cents += out_sum[j];
    return result;
}

// ---------------------------------------------------------------------------
// All-pairs BFS oracle over the directed unweighted graph.

struct PathOracle {
    unsigned long long total_hops = 0;
    unsigned long long reachable_pairs = 0;
    unsigned diameter = 0;
};

inline PathOracle bfs_path_oracle(const chequenet::CollateralNetwork& net) {
    const std::size_t n = net.node_count();
    PathOracle oracle;
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<int> dist(n, -1);
        std::vector<std::size_t> queue{s};
        dist[s] = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            std::size_t v = queue[head];
            for (const auto& e : net.out_edges(static_cast<chequenet::NodeId>(v)))
                if (dist[e.peer] < 0) {
                    dist[e.peer] = dist[v] + 1;
                    queue.push_back(e.peer);
                }
        }
        for (std::size_t t = 0; t < n; ++t) {
            if (t == s || dist[t] < 0) continue;
            oracle.total_hops += static_cast<unsigned long long>(dist[t]);
            oracle.reachable_pairs += 1;
            oracle.diameter = std::max(oracle.diameter, static_cast<unsigned>(dist[t]));
        }
    }
    return oracle;
}

// ---------------------------------------------------------------------------
// Betweenness oracle: enumerate every shortest path of every ordered pair
// and count the interior visits. Exact fractions, reduced at every step.

struct Frac {
    unsigned __int128 num = 0;
    unsigned __int128 den = 1;

    static unsigned __int128 gcd(unsigned __int128 a, unsigned __int128 b) {
        while (b) {
            unsigned __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }
    void reduce() {
        if (num == 0) {
            den = 1;
            return;
        }
        unsigned __int128 g = gcd(num, den);
        num /= g;
        den /= g;
    }
    void add(unsigned __int128 n2, unsigned __int128 d2) {
        num = num * d2 + n2 * den;
        den = den * d2;
        reduce();
    }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

inline std::vector<double> betweenness_enumeration(const chequenet::CollateralNetwork& net,
                                                   bool undirected = false) {
    const std::size_t n = net.node_count();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t v = 0; v < n; ++v) {
        for (const auto& e : net.out_edges(static_cast<chequenet::NodeId>(v)))
            adj[v].push_back(e.peer);
        if (undirected)
            for (const auto& e : net.in_edges(static_cast<chequenet::NodeId>(v)))
                adj[v].push_back(e.peer);
    }
    for (auto& lst : adj) {
        std::sort(lst.begin(), lst.end());
        lst.erase(std::unique(lst.begin(), lst.end()), lst.end());
    }

    std::vector<Frac> score(n);
    std::vector<unsigned long long> through(n);
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<int> dist(n, -1);
        std::vector<std::size_t> queue{s};
        dist[s] = 0;
        for (std::size_t head = 0; head < queue.size(); ++head)
            for (std::size_t u : adj[queue[head]])
                if (dist[u] < 0) {
                    dist[u] = dist[queue[head]] + 1;
                    queue.push_back(u);
                }

        for (std::size_t t = 0; t < n; ++t) {
            if (t == s || dist[t] < 0) continue;
            std::fill(through.begin(), through.end(), 0ULL);
            unsigned long long total = 0;
            // Depth-first enumeration of every shortest s->t path.
            std::vector<std::size_t> path{s};
            std::vector<std::size_t> cursor{0};
            while (!path.empty()) {
                std::size_t v = path.back();
                if (v == t) {
                    ++total;
                    for (std::size_t i = 1; i + 1 < path.size(); ++i) ++through[path[i]];
                    path.pop_back();
                    cursor.pop_back();
                    continue;
                }
                bool advanced = false;
                while (cursor.back() < adj[v].size()) {
                    std::size_t u = adj[v][cursor.back()++];
                    if (dist[u] == dist[v] + 1 && dist[u] <= dist[t]) {
                        path.push_back(u);
                        cursor.push_back(0);
                        advanced = true;
                        break;
                    }
                }
                if (!advanced) {
                    path.pop_back();
                    cursor.pop_back();
                }
            }
            for (std::size_t v = 0; v < n; ++v)
                if (through[v] > 0) score[v].add(through[v], total);
        }
    }

    std::vector<double> out(n);
    for (std::size_t v = 0; v < n; ++v) {
        if (undirected) {
            // Each unordered pair was visited twice.
            score[v].den *= 2;
            score[v].reduce();
        }
        out[v] = score[v].value();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Weak components via union-find.

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    }
    std::size_t find(std::size_t v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

inline std::vector<std::set<std::string>> union_find_components(
    const chequenet::CollateralNetwork& net) {
    UnionFind uf(net.node_count());
    for (chequenet::NodeId v = 0; v < net.node_count(); ++v)
        for (const auto& e : net.out_edges(v)) uf.unite(v, e.peer);
    std::map<std::size_t, std::set<std::string>> blocks;
    for (chequenet::NodeId v = 0; v < net.node_count(); ++v)
        blocks[uf.find(v)].insert(net.id_of(v));
    std::vector<std::set<std::string>> out;
    for (auto& [root, members] : blocks) out.push_back(std::move(members));
    return out;
}

// Rand index between two labelings of the same nodes.
inline double rand_index(const std::vector<int>& a, const std::vector<int>& b) {
    assert(a.size() == b.size());
    const std::size_t n = a.size();
    unsigned long long agree = 0, pairs = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            ++pairs;
            if ((a[i] == a[j]) == (b[i] == b[j])) ++agree;
        }
    return pairs ? static_cast<double>(agree) / static_cast<double>(pairs) : 1.0;
}

// Membership labels from a partition, indexed by canonical node index.
inline std::vector<int> membership_labels(const chequenet::CollateralNetwork& net,
                                          const std::vector<std::vector<chequenet::NodeId>>& blocks) {
    std::vector<int> labels(net.node_count(), -1);
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (chequenet::NodeId v : blocks[b]) labels[v] = static_cast<int>(b);
    return labels;
}

} // namespace testsupport
