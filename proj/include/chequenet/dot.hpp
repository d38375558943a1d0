#pragma once

#include <algorithm>
#include <string>

#include "chequenet/contagion.hpp"
#include "chequenet/format.hpp"
#include "chequenet/network.hpp"

namespace chequenet {

namespace detail {

// Edge label = weight in percent with 2 decimals; pen width proportional to
// the weight (floored for visibility), heavier cheques draw darker lines.
inline std::string dot_edge(const CollateralNetwork& net, NodeId from, const EdgeRef& e) {
    double w = net.fraction_of_total(e.value);
    double penwidth = std::max(0.1, 50.0 * w);
    return "  \"" + dot_escape(net.id_of(from)) + "\" -> \"" + dot_escape(net.id_of(e.peer)) +
           "\" [label=\"" + fmt_pct(w, 2) + "%\", penwidth=" + fmt_fixed(penwidth, 2) + "];\n";
}

} // namespace detail

inline std::string dot_export(const CollateralNetwork& net, const std::string& invocation) {
    std::string out = "// invocation: " + invocation + "\n";
    out += "digraph collateral {\n";
    out += "  rankdir=LR;\n";
    for (NodeId v = 0; v < net.node_count(); ++v) {
        out += "  \"" + detail::dot_escape(net.id_of(v)) + "\"";
        out += net.customer(v).funded ? " [shape=doublecircle];\n" : " [shape=ellipse];\n";
    }
    for (NodeId v = 0; v < net.node_count(); ++v)
        for (const EdgeRef& e : net.out_edges(v)) out += detail::dot_edge(net, v, e);
    out += "}\n";
    return out;
}

// One frame per cascade stage: everything failed up to and including stage k
// is filled, the stage-k entrants get a heavier outline.
inline std::string dot_frame(const CollateralNetwork& net, const CascadeResult& result,
                             std::size_t stage, const std::string& invocation) {
    std::vector<char> failed(net.node_count(), 0);
    std::vector<char> entered(net.node_count(), 0);
    for (std::size_t k = 0; k <= stage && k < result.stages.size(); ++k)
        for (NodeId v : result.stages[k].newly_failed) {
            failed[v] = 1;
            if (k == stage) entered[v] = 1;
        }

    std::string out = "// invocation: " + invocation + "\n";
    out += "digraph collateral_stage_" + std::to_string(stage) + " {\n";
    out += "  label=\"stage " + std::to_string(stage) + "\";\n";
    out += "  rankdir=LR;\n";
    for (NodeId v = 0; v < net.node_count(); ++v) {
        out += "  \"" + detail::dot_escape(net.id_of(v)) + "\" [shape=";
        out += net.customer(v).funded ? "doublecircle" : "ellipse";
        if (failed[v]) {
            out += ", style=filled, fillcolor=\"#d64545\"";
            if (entered[v]) out += ", penwidth=2.50";
        }
        out += "];\n";
    }
    for (NodeId v = 0; v < net.node_count(); ++v)
        for (const EdgeRef& e : net.out_edges(v)) out += detail::dot_edge(net, v, e);
    out += "}\n";
    return out;
}

} // namespace chequenet
