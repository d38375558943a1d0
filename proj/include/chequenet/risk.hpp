#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chequenet/contagion.hpp"
#include "chequenet/errors.hpp"
#include "chequenet/network.hpp"
#include "chequenet/rng.hpp"
#include "chequenet/stats.hpp"

namespace chequenet {

// What "l_j" means inside the composite score: the full cascaded loss seeded
// at j (default), or just j's own issued cheques.
enum class LossBasis { cascaded, direct };

struct NodeLoss {
    double uniform = 0.0;  // fraction of V
    double adjusted = 0.0; // fraction of V
    CascadeResult cascade;
};

// Losses caused by the failure of a single customer: the cascade seeded at
// {j} in both the uniform and early-stage-weighted flavors.
inline NodeLoss node_loss(const CollateralNetwork& net, int c_bp, const std::string& j) {
    ContagionConfig config;
    config.c_bp = c_bp;
    config.seeds = {j};
    NodeLoss out;
    out.cascade = run_cascade(net, config);
    out.uniform = total_uniform_loss(out.cascade);
    out.adjusted = adjusted_loss(out.cascade);
    return out;
}

namespace detail {

inline double loss_basis_value(const CollateralNetwork& net, int c_bp, NodeId j,
                               LossBasis basis) {
    if (basis == LossBasis::direct) return net.weighted_out_degree(j);
    return node_loss(net, c_bp, net.id_of(j)).uniform;
}

// Composite loss by node index; callers must guarantee j has at least one
// incoming edge.
inline double composite_loss_at(const CollateralNetwork& net, int c_bp, NodeId j,
                                LossBasis basis) {
    const std::size_t in_count = net.in_edges(j).size();
    const double win = net.weighted_in_degree(j);
    const double u = threshold_fraction(net, c_bp, j);
    const double l = loss_basis_value(net, c_bp, j, basis);
    return (win / static_cast<double>(in_count) - u) + l + win;
}

} // namespace detail

// Composite per-customer fragility score
//   g_j = (average incoming weight − u_j) + l_j + weighted in-degree,
// all terms fractions of V. Undefined for customers who never receive a
// cheque (the average would divide by zero).
inline double composite_loss(const CollateralNetwork& net, int c_bp, const std::string& j,
                             LossBasis basis = LossBasis::cascaded) {
    validate_c_bp(c_bp);
    NodeId v = net.require(j);
    if (net.in_edges(v).empty())
        throw invalid_input("composite loss undefined for " + j +
                            ": customer has no incoming cheques");
    return detail::composite_loss_at(net, c_bp, v, basis);
}

// Depth used when the caller does not pick one: the network diameter (every
// simple downstream chain fits), floored at 1.
inline std::size_t default_risk_depth(const CollateralNetwork& net) {
    auto pm = path_metrics(net);
    if (!pm) return 1;
    return std::max<std::size_t>(1, pm->diameter);
}

namespace detail {

struct RiskScorer {
    const CollateralNetwork& net;
    int c_bp;
    LossBasis basis;
    std::vector<std::optional<double>> g_cache;

    RiskScorer(const CollateralNetwork& n, int c, LossBasis b)
        : net(n), c_bp(c), basis(b), g_cache(n.node_count()) {}

    double g(NodeId j) {
        if (!g_cache[j]) g_cache[j] = composite_loss_at(net, c_bp, j, basis);
        return *g_cache[j];
    }

    // r(i, depth) = Σ over out-edges i→j of (w_ij/u_j)·g_j + r(j, depth−1),
    // with r(·, 0) = 0. The exposure-over-threshold factor reduces exactly to
    // d_ij·10000 / (c_bp·in_value(j)). Nodes already on the recursion path
    // contribute their direct term but are not re-entered.
    double risk(NodeId i, std::size_t depth, std::vector<char>& on_path) {
        if (depth == 0) return 0.0;
        double total = 0.0;
        for (const EdgeRef& e : net.out_edges(i)) {
            const NodeId j = e.peer;
            const double exposure_over_threshold =
                10000.0 * static_cast<double>(e.value) /
                (static_cast<double>(c_bp) * static_cast<double>(net.in_value(j)));
            total += exposure_over_threshold * g(j);
            if (!on_path[j]) {
                on_path[j] = 1;
                total += risk(j, depth - 1, on_path);
                on_path[j] = 0;
            }
        }
        return total;
    }

    double risk_from(NodeId i, std::size_t depth) {
        std::vector<char> on_path(net.node_count(), 0);
        on_path[i] = 1;
        return risk(i, depth, on_path);
    }
};

} // namespace detail

// Recursive downstream fragility of an issuer: each recipient's composite
// loss weighted by exposure over threshold, plus the recipients' own scores
// one level shallower. Monotone in depth whenever all g are non-negative.
inline double issuer_systemic_risk(const CollateralNetwork& net, int c_bp, const std::string& i,
                                   std::size_t depth, LossBasis basis = LossBasis::cascaded) {
    validate_c_bp(c_bp);
    if (depth < 1) throw invalid_input("systemic-risk depth must be at least 1");
    detail::RiskScorer scorer(net, c_bp, basis);
    return scorer.risk_from(net.require(i), depth);
}

// Loss of the scenario "exactly the customers in F fail at stage 0": the
// uniform total of the resulting cascade. The per-customer decomposition
// Σ_{i∈F} + Σ_{contagion} is the same number because every edge is charged
// once at its issuer's failure.
inline double scenario_loss(const CollateralNetwork& net, int c_bp,
                            const std::vector<std::string>& seed_set) {
    ContagionConfig config;
    config.c_bp = c_bp;
    config.seeds = seed_set;
    return total_uniform_loss(run_cascade(net, config));
}

inline double probability_of(const std::map<std::string, double>& probabilities,
                             const std::string& id) {
    auto it = probabilities.find(id);
    if (it == probabilities.end())
        throw invalid_input("no failure probability supplied for customer " + id);
    if (it->second < 0.0 || it->second > 1.0)
        throw invalid_input("failure probability for " + id + " outside [0, 1]");
    return it->second;
}

// P(F) under independent failures: members fail, every other universe
// member survives.
inline double scenario_probability(const std::set<std::string>& scenario,
                                   const std::map<std::string, double>& probabilities,
                                   const std::vector<std::string>& universe) {
    std::set<std::string> universe_set(universe.begin(), universe.end());
    for (const std::string& id : scenario)
        if (!universe_set.count(id))
            throw invalid_input("scenario member " + id + " is not in the candidate universe");
    double p = 1.0;
    for (const std::string& id : universe) {
        double pi = probability_of(probabilities, id);
        p *= scenario.count(id) ? pi : 1.0 - pi;
    }
    return p;
}

enum class DistributionMode { exact, monte_carlo };

struct DistributionPoint {
    Cents loss = 0;            // exact cascade loss in cents — the aggregation key
    double probability = 0.0;
};

struct LossDistribution {
    DistributionMode mode = DistributionMode::exact;
    std::vector<DistributionPoint> points; // ascending by loss
    double expected_loss = 0.0;            // fraction of V
    Cents total_value = 0;
    std::uint64_t draws = 0;               // monte-carlo only

    double loss_fraction(const DistributionPoint& p) const {
        return total_value > 0 ? static_cast<double>(p.loss) / static_cast<double>(total_value)
                               : 0.0;
    }
};

// Distribution of scenario losses over a candidate set. Exact mode walks the
// full power set (capped at 20 candidates ≈ a million cascades); Monte Carlo
// samples scenarios by independent Bernoulli draws. Every draw owns an
// addressed RNG stream derived from (seed, draw index), so the result is a
// pure function of the inputs no matter how the work is scheduled.
inline LossDistribution loss_distribution(const CollateralNetwork& net, int c_bp,
                                          const std::vector<std::string>& candidates,
                                          const std::map<std::string, double>& probabilities,
                                          DistributionMode mode, std::uint64_t draws = 0,
                                          std::uint64_t rng_seed = 0) {
    validate_c_bp(c_bp);
    std::set<std::string> unique(candidates.begin(), candidates.end());
    std::vector<std::string> universe(unique.begin(), unique.end());
    std::vector<double> p;
    for (const std::string& id : universe) {
        net.require(id);
        p.push_back(probability_of(probabilities, id));
    }

    LossDistribution dist;
    dist.mode = mode;
    dist.total_value = net.total_value();
    std::map<Cents, double> mass;

    auto cascade_loss = [&](const std::vector<std::string>& seeds) {
        ContagionConfig config;
        config.c_bp = c_bp;
        config.seeds = seeds;
        return run_cascade(net, config).total_loss;
    };

    if (mode == DistributionMode::exact) {
        if (universe.size() > 20)
            throw infeasible("exact enumeration over " + std::to_string(universe.size()) +
                             " candidates (> 20); use monte-carlo sampling instead");
        const std::uint32_t n = static_cast<std::uint32_t>(universe.size());
        for (std::uint64_t bits = 0; bits < (1ULL << n); ++bits) {
            std::vector<std::string> seeds;
            double prob = 1.0;
            for (std::uint32_t i = 0; i < n; ++i) {
                if (bits & (1ULL << i)) {
                    seeds.push_back(universe[i]);
                    prob *= p[i];
                } else {
                    prob *= 1.0 - p[i];
                }
            }
            mass[cascade_loss(seeds)] += prob;
        }
    } else {
        if (draws < 1) throw invalid_input("monte-carlo mode requires draws >= 1");
        dist.draws = draws;
        const double unit = 1.0 / static_cast<double>(draws);
        for (std::uint64_t d = 0; d < draws; ++d) {
            detail::SplitMix64 rng = detail::stream_at(rng_seed, d);
            std::vector<std::string> seeds;
            for (std::size_t i = 0; i < universe.size(); ++i)
                if (rng.next_unit() < p[i]) seeds.push_back(universe[i]);
            mass[cascade_loss(seeds)] += unit;
        }
    }

    for (auto& [loss, prob] : mass) {
        dist.points.push_back(DistributionPoint{loss, prob});
        dist.expected_loss += prob * (dist.total_value > 0
                                          ? static_cast<double>(loss) /
                                                static_cast<double>(dist.total_value)
                                          : 0.0);
    }
    return dist;
}

enum class RankMetric { uniform, adjusted, composite, systemic };

struct RankEntry {
    NodeId node = 0;
    double value = 0.0; // fraction for loss metrics; index value for g and r
};

// Customers ordered by a risk metric, descending, ties to the smaller id.
// Customers for whom the metric is undefined (composite loss without any
// incoming cheque) are left out. `top` limits the list; the full ordering is
// returned when top exceeds the number of scored customers.
inline std::vector<RankEntry> rank_customers(const CollateralNetwork& net, int c_bp,
                                             RankMetric metric, std::size_t top,
                                             std::size_t depth = 0,
                                             LossBasis basis = LossBasis::cascaded) {
    validate_c_bp(c_bp);
    if (top < 1) throw invalid_input("rank size must be at least 1");

    std::vector<RankEntry> entries;
    detail::RiskScorer scorer(net, c_bp, basis);
    const std::size_t risk_depth = depth > 0 ? depth : default_risk_depth(net);

    for (NodeId v = 0; v < net.node_count(); ++v) {
        RankEntry e;
        e.node = v;
        switch (metric) {
        case RankMetric::uniform:
            e.value = node_loss(net, c_bp, net.id_of(v)).uniform;
            break;
        case RankMetric::adjusted:
            e.value = node_loss(net, c_bp, net.id_of(v)).adjusted;
            break;
        case RankMetric::composite:
            if (net.in_edges(v).empty()) continue;
            e.value = scorer.g(v);
            break;
        case RankMetric::systemic:
            e.value = scorer.risk_from(v, risk_depth);
            break;
        }
        entries.push_back(e);
    }

    std::stable_sort(entries.begin(), entries.end(),
                     [](const RankEntry& a, const RankEntry& b) { return a.value > b.value; });
    if (entries.size() > top) entries.resize(top);
    return entries;
}

struct WhatIfReport {
    std::string issuer_id;
    std::string recipient_id;
    Cents cheque_value = 0;
    Cents total_value_before = 0;
    Cents total_value_after = 0;
    std::optional<double> issuer_risk_before; // absent: issuer new to the network
    double issuer_risk_after = 0.0;
    std::optional<double> recipient_g_before; // absent: no incoming cheques before
    double recipient_g_after = 0.0;
    std::optional<double> recipient_u_before; // absent: recipient new to the network
    double recipient_u_after = 0.0;
    std::size_t depth_used = 0;
};

// Evaluate one prospective cheque without touching the original network: a
// derived network with the extra exposure is built and both are scored. The
// same recursion depth (diameter of the derived network by default) is used
// on both sides so the deltas compare like for like.
inline WhatIfReport whatif_add_cheque(const CollateralNetwork& net, int c_bp,
                                      const Cheque& cheque, std::size_t depth = 0,
                                      LossBasis basis = LossBasis::cascaded) {
    validate_c_bp(c_bp);
    validate_cheque(cheque);

    std::vector<Customer> customers = net.customers();
    bool issuer_known = net.find(cheque.issuer_id).has_value();
    bool recipient_known = net.find(cheque.recipient_id).has_value();
    if (!issuer_known) customers.push_back(Customer{cheque.issuer_id, false, ""});
    for (Customer& c : customers)
        if (c.id == cheque.recipient_id) c.funded = true;
    if (!recipient_known) customers.push_back(Customer{cheque.recipient_id, true, ""});

    std::vector<AggregateEdge> edges;
    bool merged = false;
    for (NodeId v = 0; v < net.node_count(); ++v)
        for (const EdgeRef& e : net.out_edges(v)) {
            AggregateEdge edge{net.id_of(v), net.id_of(e.peer), e.value};
            if (edge.from == cheque.issuer_id && edge.to == cheque.recipient_id) {
                edge.value += cheque.value;
                merged = true;
            }
            edges.push_back(std::move(edge));
        }
    if (!merged)
        edges.push_back(AggregateEdge{cheque.issuer_id, cheque.recipient_id, cheque.value});

    CollateralNetwork after = CollateralNetwork::from_parts(std::move(customers), edges);

    WhatIfReport report;
    report.issuer_id = cheque.issuer_id;
    report.recipient_id = cheque.recipient_id;
    report.cheque_value = cheque.value;
    report.total_value_before = net.total_value();
    report.total_value_after = after.total_value();
    report.depth_used = depth > 0 ? depth : default_risk_depth(after);

    if (issuer_known)
        report.issuer_risk_before =
            issuer_systemic_risk(net, c_bp, cheque.issuer_id, report.depth_used, basis);
    report.issuer_risk_after =
        issuer_systemic_risk(after, c_bp, cheque.issuer_id, report.depth_used, basis);

    if (recipient_known) {
        NodeId r = net.require(cheque.recipient_id);
        report.recipient_u_before = threshold_fraction(net, c_bp, r);
        if (!net.in_edges(r).empty())
            report.recipient_g_before = composite_loss(net, c_bp, cheque.recipient_id, basis);
    }
    report.recipient_u_after = threshold_fraction(after, c_bp, after.require(cheque.recipient_id));
    report.recipient_g_after = composite_loss(after, c_bp, cheque.recipient_id, basis);
    return report;
}

} // namespace chequenet
