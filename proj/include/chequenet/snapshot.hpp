#pragma once

#include <fstream>
#include <istream>
#include <string>
#include <vector>

#include <json.hpp>

#include "chequenet/errors.hpp"
#include "chequenet/format.hpp"
#include "chequenet/network.hpp"

namespace chequenet {

// Canonical network snapshot. The writer is hand-rolled: keys are emitted in
// sorted order, arrays in canonical order, no floating point anywhere — so
// the same network always serializes to the same bytes, no matter which code
// path produced it. Deliberately carries no invocation line or timestamps:
// this is data, not a report.
inline std::string snapshot_json(const CollateralNetwork& net) {
    std::string out = "{\n  \"customers\": [";
    for (std::size_t i = 0; i < net.node_count(); ++i) {
        const Customer& c = net.customer(static_cast<NodeId>(i));
        out += i == 0 ? "\n" : ",\n";
        out += "    {\"funded\": ";
        out += c.funded ? "true" : "false";
        out += ", \"id\": \"" + detail::json_escape(c.id) + "\"";
        out += ", \"label\": \"" + detail::json_escape(c.label) + "\"}";
    }
    out += net.node_count() > 0 ? "\n  ],\n" : "],\n";
    out += "  \"edges\": [";
    bool first = true;
    for (NodeId v = 0; v < net.node_count(); ++v)
        for (const EdgeRef& e : net.out_edges(v)) {
            out += first ? "\n" : ",\n";
            first = false;
            out += "    {\"from\": \"" + detail::json_escape(net.id_of(v)) + "\"";
            out += ", \"to\": \"" + detail::json_escape(net.id_of(e.peer)) + "\"";
            out += ", \"value_cents\": " + std::to_string(e.value) + "}";
        }
    out += first ? "],\n" : "\n  ],\n";
    out += "  \"total_value_cents\": " + std::to_string(net.total_value()) + "\n}\n";
    return out;
}

// Parses and validates a snapshot back into a network. Parsing is delegated
// to a JSON library; all shape checks produce invalid_input diagnostics.
inline CollateralNetwork read_snapshot_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw invalid_input(std::string("snapshot parse error: ") + e.what());
    }
    if (!doc.is_object()) throw invalid_input("snapshot root must be an object");
    if (!doc.contains("customers") || !doc["customers"].is_array())
        throw invalid_input("snapshot is missing the \"customers\" array");
    if (!doc.contains("edges") || !doc["edges"].is_array())
        throw invalid_input("snapshot is missing the \"edges\" array");
    if (!doc.contains("total_value_cents") || !doc["total_value_cents"].is_number_integer())
        throw invalid_input("snapshot is missing integer \"total_value_cents\"");

    std::vector<Customer> customers;
    for (const auto& c : doc["customers"]) {
        if (!c.is_object() || !c.contains("id") || !c["id"].is_string())
            throw invalid_input("snapshot customer entries need a string \"id\"");
        Customer customer;
        customer.id = c["id"].get<std::string>();
        if (c.contains("funded")) {
            if (!c["funded"].is_boolean())
                throw invalid_input("snapshot customer \"funded\" must be a boolean");
            customer.funded = c["funded"].get<bool>();
        }
        if (c.contains("label")) {
            if (!c["label"].is_string())
                throw invalid_input("snapshot customer \"label\" must be a string");
            customer.label = c["label"].get<std::string>();
        }
        customers.push_back(std::move(customer));
    }
    if (customers.empty()) throw invalid_input("empty network: snapshot has no customers");

    std::vector<AggregateEdge> edges;
    Cents sum = 0;
    for (const auto& e : doc["edges"]) {
        if (!e.is_object() || !e.contains("from") || !e["from"].is_string() ||
            !e.contains("to") || !e["to"].is_string() || !e.contains("value_cents") ||
            !e["value_cents"].is_number_integer())
            throw invalid_input(
                "snapshot edge entries need string \"from\"/\"to\" and integer \"value_cents\"");
        AggregateEdge edge;
        edge.from = e["from"].get<std::string>();
        edge.to = e["to"].get<std::string>();
        edge.value = e["value_cents"].get<Cents>();
        sum += edge.value;
        edges.push_back(std::move(edge));
    }
    const Cents declared = doc["total_value_cents"].get<Cents>();
    if (declared != sum)
        throw invalid_input("snapshot total_value_cents " + std::to_string(declared) +
                            " does not match the edge sum " + std::to_string(sum));
    return CollateralNetwork::from_parts(std::move(customers), edges);
}

inline CollateralNetwork read_snapshot_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return read_snapshot_json(text);
}

} // namespace chequenet
