#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "chequenet/cheque.hpp"
#include "chequenet/errors.hpp"
#include "chequenet/network.hpp"
#include "chequenet/rng.hpp"

namespace chequenet {

struct GeneratorParams {
    std::size_t node_count = 422;
    std::size_t funded_count = 33;
    std::size_t target_edge_count = 450; // aggregated issuer→recipient links
    double power_law_alpha = 1.3;        // in-degree distribution of funded customers
    std::size_t max_out_degree = 3;
    Cents min_value_cents = 10000;       // per-cheque value range
    Cents max_value_cents = 5000000;
    std::uint64_t rng_seed = 1;
};

struct GeneratedNetwork {
    CollateralNetwork network;
    std::vector<Cheque> cheques;
};

namespace detail {

// Zero-padded decimal ids: canonical (lexicographic) order coincides with
// numeric order, which keeps generated listings readable.
inline std::string padded_id(std::size_t index, std::size_t width) {
    std::string s = std::to_string(index + 1);
    if (s.size() < width) s.insert(0, width - s.size(), '0');
    return s;
}

// Inverse-CDF table for a discrete power law P(x) ∝ x^(−α) truncated to
// x ∈ [1, cap]. The table is a plain cumulative double array filled in index
// order, so identical inputs give identical draws on every platform.
struct ZetaSampler {
    std::vector<double> cumulative;

    ZetaSampler(double alpha, std::size_t cap) {
        cumulative.reserve(cap);
        double acc = 0.0;
        for (std::size_t x = 1; x <= cap; ++x) {
            acc += std::pow(static_cast<double>(x), -alpha);
            cumulative.push_back(acc);
        }
    }

    std::size_t draw(SplitMix64& rng) const {
        double u = rng.next_unit() * cumulative.back();
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) --it;
        return static_cast<std::size_t>(it - cumulative.begin()) + 1;
    }
};

} // namespace detail

inline void validate_generator_params(const GeneratorParams& p) {
    if (p.node_count < 1) throw invalid_input("node_count must be at least 1");
    if (p.funded_count > p.node_count)
        throw invalid_input("funded_count exceeds node_count");
    if (p.max_out_degree < 1) throw invalid_input("max_out_degree must be at least 1");
    if (p.min_value_cents < 1 || p.max_value_cents < p.min_value_cents)
        throw invalid_input("cheque value range must satisfy 1 <= min <= max");
    if (!(p.power_law_alpha > 0.0))
        throw invalid_input("power_law_alpha must be positive");

    const std::size_t n = p.node_count;
    const std::size_t m = p.funded_count;
    const std::size_t e = p.target_edge_count;
    if (e == 0) return; // degenerate empty network is allowed

    if (m < 1)
        throw infeasible("edges need funded recipients: funded_count = 0 but target_edge_count = " +
                         std::to_string(e));
    if (n < 2) throw infeasible("edges need two distinct customers");

    // Every customer must take part in at least one cheque so the emitted
    // CSV round-trips to the same customer set: non-funded customers issue,
    // funded customers receive, and (when two or more funded customers
    // exist) funded customers issue as well.
    const std::size_t min_edges = m >= 2 ? n : n - 1;
    if (e < min_edges)
        throw infeasible("target_edge_count " + std::to_string(e) + " below the " +
                         std::to_string(min_edges) + " needed to cover every customer");

    const std::size_t funded_out_cap = std::min(p.max_out_degree, m - 1);
    const std::size_t other_out_cap = std::min(p.max_out_degree, m);
    const std::size_t issuer_capacity = m * funded_out_cap + (n - m) * other_out_cap;
    const std::size_t recipient_capacity = m * (n - 1);
    if (e > issuer_capacity)
        throw infeasible("target_edge_count " + std::to_string(e) +
                         " exceeds issuer capacity " + std::to_string(issuer_capacity) +
                         " (funded_count x out-degree caps)");
    if (e > recipient_capacity)
        throw infeasible("target_edge_count " + std::to_string(e) +
                         " exceeds recipient capacity " + std::to_string(recipient_capacity));
    if (m >= 2 && funded_out_cap == 0)
        throw infeasible("funded customers cannot issue: max_out_degree too small");
}

// Deterministic synthetic network with the structural profile of the real
// book: a fixed number of funded customers whose in-degrees follow a
// truncated discrete power law, issuers reused preferentially, out-degrees
// capped, roughly 40% of links carrying two cheques instead of one. Every
// byte of the output is a function of the parameters and the seed.
inline GeneratedNetwork generate(const GeneratorParams& params) {
    validate_generator_params(params);

    const std::size_t n = params.node_count;
    const std::size_t m = params.funded_count;
    const std::size_t e = params.target_edge_count;
    const std::size_t width = std::to_string(n).size();

    detail::SplitMix64 rng = detail::stream_at(params.rng_seed, 0);

    // Funded subset: partial Fisher–Yates over the node indices.
    std::vector<std::size_t> indices(n);
    for (std::size_t i = 0; i < n; ++i) indices[i] = i;
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.next_below(n - i));
        std::swap(indices[i], indices[j]);
    }
    std::vector<char> funded(n, 0);
    for (std::size_t i = 0; i < m; ++i) funded[indices[i]] = 1;

    std::vector<Customer> customers;
    customers.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        customers.push_back(Customer{detail::padded_id(i, width), funded[i] != 0, ""});

    if (e == 0)
        return GeneratedNetwork{CollateralNetwork::from_parts(customers, {}), {}};

    std::vector<std::size_t> funded_nodes;
    for (std::size_t i = 0; i < n; ++i)
        if (funded[i]) funded_nodes.push_back(i);

    // In-degree budgets for the funded customers: power-law draws capped at
    // n−1 distinct issuers, then nudged onto the exact edge target — the
    // current largest budget is decremented while the total is high, and a
    // budget chosen preferentially (probability ∝ current size) grows while
    // the total is low. Both directions preserve the heavy tail.
    detail::ZetaSampler sampler(params.power_law_alpha, n - 1);
    std::vector<std::size_t> budget(m);
    std::size_t total = 0;
    for (std::size_t i = 0; i < m; ++i) {
        budget[i] = sampler.draw(rng);
        total += budget[i];
    }
    while (total > e) {
        std::size_t largest = 0;
        for (std::size_t i = 1; i < m; ++i)
            if (budget[i] > budget[largest]) largest = i;
        --budget[largest];
        --total;
    }
    while (total < e) {
        std::uint64_t r = rng.next_below(total);
        std::size_t pick = 0;
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < m; ++i) {
            acc += budget[i];
            if (r < acc) {
                pick = i;
                break;
            }
        }
        if (budget[pick] < n - 1) {
            ++budget[pick];
            ++total;
        } else {
            bool grew = false;
            for (std::size_t i = 0; i < m; ++i)
                if (budget[i] < n - 1) {
                    ++budget[i];
                    ++total;
                    grew = true;
                    break;
                }
            if (!grew)
                throw infeasible("in-degree budgets cannot reach the edge target");
        }
    }

    std::vector<std::size_t> remaining(budget);
    std::vector<std::set<std::size_t>> used_issuers(m); // per funded slot index
    std::vector<std::size_t> out_degree(n, 0);
    std::vector<std::pair<std::size_t, std::size_t>> links; // (issuer, recipient)
    links.reserve(e);

    auto out_cap = [&](std::size_t v) {
        return std::min(params.max_out_degree,
                        funded[v] ? m - 1 : m);
    };
    auto place = [&](std::size_t issuer, std::size_t f_idx) {
        links.emplace_back(issuer, funded_nodes[f_idx]);
        used_issuers[f_idx].insert(issuer);
        --remaining[f_idx];
        ++out_degree[issuer];
    };

    // Coverage pass: every customer who must issue gets exactly one link, in
    // a shuffled deterministic order.
    std::vector<std::size_t> cover_order;
    for (std::size_t v = 0; v < n; ++v)
        if (m >= 2 || !funded[v]) cover_order.push_back(v);
    for (std::size_t i = cover_order.size(); i > 1; --i)
        std::swap(cover_order[i - 1],
                  cover_order[static_cast<std::size_t>(rng.next_below(i))]);

    for (std::size_t v : cover_order) {
        std::vector<std::size_t> options;
        for (std::size_t i = 0; i < m; ++i)
            if (remaining[i] > 0 && funded_nodes[i] != v) options.push_back(i);
        if (options.empty()) {
            // Only v's own budget is left: shift one unit to another funded
            // customer so v has somewhere to issue.
            std::size_t self = static_cast<std::size_t>(
                std::find(funded_nodes.begin(), funded_nodes.end(), v) - funded_nodes.begin());
            if (self >= m) throw infeasible("cannot cover every customer with an issued cheque");
            bool moved = false;
            for (std::size_t i = 0; i < m && !moved; ++i) {
                if (i == self || budget[i] >= n - 1) continue;
                --remaining[self];
                --budget[self];
                ++remaining[i];
                ++budget[i];
                options.push_back(i);
                moved = true;
            }
            if (!moved) throw infeasible("cannot cover every customer with an issued cheque");
        }
        std::size_t pick = options[static_cast<std::size_t>(rng.next_below(options.size()))];
        place(v, pick);
    }

    // Fill pass: hand out the remaining in-slots, reusing issuers
    // preferentially (weight = current out-degree + 1) under the caps.
    // Recipients are drained largest-budget-first; a slot nobody can serve
    // is moved to a recipient somebody can still reach.
    auto eligible_issuers = [&](std::size_t f_idx) {
        std::vector<std::size_t> eligible;
        for (std::size_t u = 0; u < n; ++u) {
            if (u == funded_nodes[f_idx]) continue;
            if (out_degree[u] >= out_cap(u)) continue;
            if (used_issuers[f_idx].count(u)) continue;
            eligible.push_back(u);
        }
        return eligible;
    };

    std::size_t slots_left = e - links.size();
    std::size_t repairs = 0;
    while (slots_left > 0) {
        std::size_t f_idx = m;
        for (std::size_t i = 0; i < m; ++i)
            if (remaining[i] > 0 && (f_idx == m || remaining[i] > remaining[f_idx])) f_idx = i;

        std::vector<std::size_t> eligible = eligible_issuers(f_idx);
        if (!eligible.empty()) {
            std::uint64_t weight_sum = 0;
            for (std::size_t u : eligible) weight_sum += out_degree[u] + 1;
            std::uint64_t r = rng.next_below(weight_sum);
            std::uint64_t acc = 0;
            std::size_t chosen = eligible.back();
            for (std::size_t u : eligible) {
                acc += out_degree[u] + 1;
                if (r < acc) {
                    chosen = u;
                    break;
                }
            }
            place(chosen, f_idx);
            --slots_left;
            continue;
        }
        // No issuer can reach this recipient: move the slot to another
        // recipient that still has room and a willing issuer.
        if (++repairs > 4 * e)
            throw infeasible("edge assignment cannot satisfy the degree caps");
        bool moved = false;
        for (std::size_t i = 0; i < m && !moved; ++i) {
            if (i == f_idx || budget[i] >= n - 1) continue;
            if (eligible_issuers(i).empty()) continue;
            --remaining[f_idx];
            --budget[f_idx];
            ++remaining[i];
            ++budget[i];
            moved = true;
        }
        if (!moved) throw infeasible("edge assignment cannot satisfy the degree caps");
    }

    // Materialize cheques in canonical link order so the emitted bytes do
    // not depend on assignment internals. Roughly 40% of links carry two
    // cheques, echoing the cheques-to-links ratio of the real book.
    std::sort(links.begin(), links.end(), [&](const auto& a, const auto& b) {
        const std::string& af = customers[a.first].id;
        const std::string& bf = customers[b.first].id;
        if (af != bf) return af < bf;
        return customers[a.second].id < customers[b.second].id;
    });

    std::vector<Cheque> cheques;
    cheques.reserve(links.size() * 2);
    std::size_t serial = 0;
    auto next_cheque = [&](std::size_t issuer, std::size_t recipient) {
        Cheque c;
        c.cheque_id = "C" + detail::padded_id(serial++, 6);
        c.issuer_id = customers[issuer].id;
        c.recipient_id = customers[recipient].id;
        c.value = rng.next_in(params.min_value_cents, params.max_value_cents);
        c.issue_date = "2024-01-02";
        int month = static_cast<int>(rng.next_in(2, 12));
        int day = static_cast<int>(rng.next_in(1, 28));
        char buf[11];
        std::snprintf(buf, sizeof(buf), "2024-%02d-%02d", month, day);
        c.maturity_date = buf;
        return c;
    };
    for (auto& [issuer, recipient] : links) {
        bool split = rng.next_below(100) < 40;
        cheques.push_back(next_cheque(issuer, recipient));
        if (split) cheques.push_back(next_cheque(issuer, recipient));
    }

    CollateralNetwork network = CollateralNetwork::from_cheques(cheques);
    return GeneratedNetwork{std::move(network), std::move(cheques)};
}

} // namespace chequenet
