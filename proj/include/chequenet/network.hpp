#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "chequenet/cheque.hpp"
#include "chequenet/errors.hpp"

namespace chequenet {

using NodeId = std::uint32_t;

struct Customer {
    std::string id;
    bool funded = false; // received credit against pledged cheques
    std::string label;
};

// Aggregated exposure i -> j in cents; the unit the snapshot format uses.
struct AggregateEdge {
    std::string from;
    std::string to;
    Cents value = 0;
};

// Adjacency entry: peer node and aggregate cheque value on the edge.
struct EdgeRef {
    NodeId peer;
    Cents value;
};

// Weighted directed graph of aggregated cheque exposures. Immutable after
// construction; every accessor is a pure read, so instances can be shared
// freely across threads. Node indices follow the canonical order, which is
// lexicographic by customer id.
class CollateralNetwork {
public:
    static CollateralNetwork from_cheques(const std::vector<Cheque>& cheques) {
        if (cheques.empty())
            throw invalid_input("empty network: no cheque records");
        std::unordered_set<std::string> seen_ids;
        seen_ids.reserve(cheques.size());
        std::map<std::string, bool> funded; // id -> is recipient anywhere
        std::map<std::pair<std::string, std::string>, Cents> agg;
        for (const Cheque& c : cheques) {
            validate_cheque(c);
            if (!seen_ids.insert(c.cheque_id).second)
                throw invalid_input("duplicate cheque_id: " + c.cheque_id);
            funded.emplace(c.issuer_id, false);
            funded[c.recipient_id] = true;
            agg[{c.issuer_id, c.recipient_id}] += c.value;
        }
        std::vector<Customer> customers;
        customers.reserve(funded.size());
        for (auto& [id, is_funded] : funded)
            customers.push_back(Customer{id, is_funded, ""});
        std::vector<AggregateEdge> edges;
        edges.reserve(agg.size());
        for (auto& [key, value] : agg)
            edges.push_back(AggregateEdge{key.first, key.second, value});
        return CollateralNetwork(std::move(customers), edges);
    }

    // Lower-level constructor used by the snapshot loader, the generator and
    // what-if derivations. Edges must already be aggregated per (from, to).
    static CollateralNetwork from_parts(std::vector<Customer> customers,
                                        const std::vector<AggregateEdge>& edges) {
        return CollateralNetwork(std::move(customers), edges);
    }

    std::size_t node_count() const { return customers_.size(); }
    std::size_t edge_count() const { return edge_count_; }
    Cents total_value() const { return total_value_; }

    const std::vector<Customer>& customers() const { return customers_; }
    const Customer& customer(NodeId v) const { return customers_[v]; }
    const std::string& id_of(NodeId v) const { return customers_[v].id; }

    std::optional<NodeId> find(std::string_view id) const {
        auto it = std::lower_bound(customers_.begin(), customers_.end(), id,
                                   [](const Customer& c, std::string_view s) { return c.id < s; });
        if (it == customers_.end() || it->id != id) return std::nullopt;
        return static_cast<NodeId>(it - customers_.begin());
    }

    NodeId require(std::string_view id) const {
        auto v = find(id);
        if (!v) throw invalid_input("unknown customer id: " + std::string(id));
        return *v;
    }

    std::span<const EdgeRef> out_edges(NodeId v) const { return out_[v]; }
    std::span<const EdgeRef> in_edges(NodeId v) const { return in_[v]; }

    Cents out_value(NodeId v) const { return out_value_[v]; }
    Cents in_value(NodeId v) const { return in_value_[v]; }

    // Aggregate exposure on edge (i, j); 0 when the edge does not exist.
    Cents exposure(NodeId i, NodeId j) const {
        const auto& adj = out_[i];
        auto it = std::lower_bound(adj.begin(), adj.end(), j,
                                   [](const EdgeRef& e, NodeId t) { return e.peer < t; });
        if (it == adj.end() || it->peer != j) return 0;
        return it->value;
    }

    double fraction_of_total(Cents v) const {
        return total_value_ > 0 ? static_cast<double>(v) / static_cast<double>(total_value_) : 0.0;
    }

    double weight(NodeId i, NodeId j) const { return fraction_of_total(exposure(i, j)); }
    double weighted_in_degree(NodeId v) const { return fraction_of_total(in_value_[v]); }
    double weighted_out_degree(NodeId v) const { return fraction_of_total(out_value_[v]); }

private:
    CollateralNetwork(std::vector<Customer> customers, const std::vector<AggregateEdge>& edges) {
        std::sort(customers.begin(), customers.end(),
                  [](const Customer& a, const Customer& b) { return a.id < b.id; });
        for (std::size_t i = 0; i + 1 < customers.size(); ++i)
            if (customers[i].id == customers[i + 1].id)
                throw invalid_input("duplicate customer id: " + customers[i].id);
        customers_ = std::move(customers);

        const std::size_t n = customers_.size();
        out_.assign(n, {});
        in_.assign(n, {});
        out_value_.assign(n, 0);
        in_value_.assign(n, 0);
        total_value_ = 0;
        edge_count_ = edges.size();

        for (const AggregateEdge& e : edges) {
            if (e.value <= 0)
                throw invalid_input("edge " + e.from + " -> " + e.to +
                                    ": value must be positive");
            if (e.from == e.to)
                throw invalid_input("self edge on customer " + e.from);
            NodeId i = require(e.from);
            NodeId j = require(e.to);
            out_[i].push_back(EdgeRef{j, e.value});
            in_[j].push_back(EdgeRef{i, e.value});
            out_value_[i] += e.value;
            in_value_[j] += e.value;
            total_value_ += e.value;
        }
        for (auto& adj : out_) {
            std::sort(adj.begin(), adj.end(),
                      [](const EdgeRef& a, const EdgeRef& b) { return a.peer < b.peer; });
            for (std::size_t i = 0; i + 1 < adj.size(); ++i)
                if (adj[i].peer == adj[i + 1].peer)
                    throw invalid_input("duplicate aggregated edge");
        }
        for (auto& adj : in_)
            std::sort(adj.begin(), adj.end(),
                      [](const EdgeRef& a, const EdgeRef& b) { return a.peer < b.peer; });

        for (NodeId j = 0; j < n; ++j)
            if (!in_[j].empty() && !customers_[j].funded)
                throw invalid_input("customer " + customers_[j].id +
                                    " receives cheques but is not marked funded");
    }

    std::vector<Customer> customers_;
    std::vector<std::vector<EdgeRef>> out_;
    std::vector<std::vector<EdgeRef>> in_;
    std::vector<Cents> out_value_;
    std::vector<Cents> in_value_;
    Cents total_value_ = 0;
    std::size_t edge_count_ = 0;
};

inline CollateralNetwork ingest_cheques(const std::vector<Cheque>& records) {
    return CollateralNetwork::from_cheques(records);
}

inline double weighted_in_degree(const CollateralNetwork& net, std::string_view id) {
    return net.weighted_in_degree(net.require(id));
}

inline double weighted_out_degree(const CollateralNetwork& net, std::string_view id) {
    return net.weighted_out_degree(net.require(id));
}

} // namespace chequenet
