#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "chequenet/contagion.hpp"
#include "chequenet/format.hpp"
#include "chequenet/network.hpp"
#include "chequenet/risk.hpp"
#include "chequenet/stats.hpp"

namespace chequenet {

// Stage-by-stage cascade report. Keys are alphabetical within every object
// and percentages carry exactly 4 decimals, so identical runs are
// byte-identical. `raw` switches every percentage to a plain fraction with
// 10 decimals under *_frac keys.
inline std::string cascade_report_json(const CollateralNetwork& net, const CascadeResult& result,
                                       const std::string& invocation, bool raw = false) {
    const char* suffix = raw ? "_frac" : "_pct";
    auto loss_value = [&](Cents cents) {
        double fraction = result.total_value > 0 ? static_cast<double>(cents) /
                                                       static_cast<double>(result.total_value)
                                                 : 0.0;
        return raw ? detail::fmt_fixed(fraction, 10) : detail::fmt_pct(fraction, 4);
    };
    auto id_array = [&](const std::vector<NodeId>& nodes) {
        std::string out = "[";
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (i > 0) out += ", ";
            out += "\"" + detail::json_escape(net.id_of(nodes[i])) + "\"";
        }
        return out + "]";
    };

    std::string out = "{\n";
    out += "  \"adjusted_loss" + std::string(suffix) + "\": ";
    out += raw ? detail::fmt_fixed(adjusted_loss(result), 10)
               : detail::fmt_pct(adjusted_loss(result), 4);
    out += ",\n  \"c_bp\": " + std::to_string(result.c_bp);
    out += ",\n  \"invocation\": \"" + detail::json_escape(invocation) + "\"";
    out += ",\n  \"seeds\": " + id_array(result.seeds);
    out += ",\n  \"stages\": [";
    for (std::size_t k = 0; k < result.stages.size(); ++k) {
        out += k == 0 ? "\n" : ",\n";
        out += "    {\"k\": " + std::to_string(k);
        out += ", \"newly_failed\": " + id_array(result.stages[k].newly_failed);
        out += ", \"stage_loss" + std::string(suffix) + "\": " + loss_value(result.stages[k].loss);
        out += "}";
    }
    out += result.stages.empty() ? "]" : "\n  ]";
    out += ",\n  \"total_loss" + std::string(suffix) + "\": " + loss_value(result.total_loss);
    out += "\n}\n";
    return out;
}

// Human-readable descriptive block plus the two top-k tables. Percentages in
// the tables use 2 decimals like the printed tables this mirrors; `raw`
// switches to 10-decimal fractions.
inline std::string stats_report_text(const CollateralNetwork& net, const NetworkStats& stats,
                                     std::size_t top, GraphView betweenness_view,
                                     const std::string& invocation, bool raw = false) {
    auto pct = [&](double fraction) {
        return raw ? detail::fmt_fixed(fraction, 10) : detail::fmt_pct(fraction, 2) + "%";
    };
    std::string out = "# invocation: " + invocation + "\n";
    out += "nodes                 " + std::to_string(stats.node_count) + "\n";
    out += "edges                 " + std::to_string(stats.edge_count) + "\n";
    out += "average degree        " + detail::fmt_fixed(stats.average_degree, 2) + "\n";
    out += "max in-degree         " + std::to_string(stats.max_in_degree) + "\n";
    out += "max out-degree        " + std::to_string(stats.max_out_degree) + "\n";
    out += "weakly connected      " + std::string(stats.weakly_connected ? "true" : "false") +
           "\n";
    out += "components            " + std::to_string(stats.component_count) + "\n";
    if (stats.paths) {
        out += "average path length   " + detail::fmt_fixed(stats.paths->average(), 2) + "\n";
        out += "diameter              " + std::to_string(stats.paths->diameter) + "\n";
    } else {
        out += "average path length   n/a (no reachable pairs)\n";
        out += "diameter              n/a (no reachable pairs)\n";
    }
    if (stats.power_law) {
        out += "power-law exponent    " + detail::fmt_fixed(stats.power_law->alpha, 2) +
               " (discrete MLE, x_min=1, " + std::to_string(stats.power_law->sample_count) +
               " samples" + (stats.power_law->degenerate ? ", degenerate" : "") + ")\n";
    } else {
        out += "power-law exponent    n/a (fewer than 10 positive in-degrees)\n";
    }
    out += "funded customers      " + std::to_string(stats.funded_count) + "\n";
    out += "total value cents     " + std::to_string(stats.total_value) + "\n";
    out += "communities           " + std::to_string(stats.community_count) + "\n";

    std::vector<NodeId> order(net.node_count());
    for (NodeId v = 0; v < net.node_count(); ++v) order[v] = v;

    out += "\ntop weighted in-degree\n";
    out += "rank  customer_id  weighted_in_degree\n";
    std::vector<NodeId> by_in = order;
    std::stable_sort(by_in.begin(), by_in.end(),
                     [&](NodeId a, NodeId b) { return net.in_value(a) > net.in_value(b); });
    for (std::size_t i = 0; i < std::min(top, by_in.size()); ++i)
        out += std::to_string(i + 1) + "  " + net.id_of(by_in[i]) + "  " +
               pct(net.weighted_in_degree(by_in[i])) + "\n";

    out += "\ntop betweenness (" +
           std::string(betweenness_view == GraphView::directed ? "directed" : "undirected") +
           ")\n";
    out += "rank  customer_id  score\n";
    std::vector<double> scores = betweenness(net, betweenness_view);
    std::vector<NodeId> by_bw = order;
    std::stable_sort(by_bw.begin(), by_bw.end(),
                     [&](NodeId a, NodeId b) { return scores[a] > scores[b]; });
    for (std::size_t i = 0; i < std::min(top, by_bw.size()); ++i)
        out += std::to_string(i + 1) + "  " + net.id_of(by_bw[i]) + "  " +
               detail::fmt_fixed(scores[by_bw[i]], 4) + "\n";
    return out;
}

// Before/after readout for one prospective cheque. Absent before-values
// (new customer, or composite loss undefined without incoming cheques) are
// JSON nulls.
inline std::string whatif_report_json(const WhatIfReport& report, int c_bp,
                                      const std::string& invocation) {
    auto pct_or_null = [&](const std::optional<double>& v) {
        return v ? detail::fmt_pct(*v, 6) : std::string("null");
    };
    std::string out = "{\n";
    out += "  \"c_bp\": " + std::to_string(c_bp) + ",\n";
    out += "  \"cheque_value_cents\": " + std::to_string(report.cheque_value) + ",\n";
    out += "  \"depth_used\": " + std::to_string(report.depth_used) + ",\n";
    out += "  \"invocation\": \"" + detail::json_escape(invocation) + "\",\n";
    out += "  \"issuer\": \"" + detail::json_escape(report.issuer_id) + "\",\n";
    out += "  \"issuer_risk_pct_after\": " + detail::fmt_pct(report.issuer_risk_after, 6) + ",\n";
    out += "  \"issuer_risk_pct_before\": " + pct_or_null(report.issuer_risk_before) + ",\n";
    out += "  \"recipient\": \"" + detail::json_escape(report.recipient_id) + "\",\n";
    out += "  \"recipient_g_pct_after\": " + detail::fmt_pct(report.recipient_g_after, 6) + ",\n";
    out += "  \"recipient_g_pct_before\": " + pct_or_null(report.recipient_g_before) + ",\n";
    out += "  \"recipient_u_pct_after\": " + detail::fmt_pct(report.recipient_u_after, 6) + ",\n";
    out += "  \"recipient_u_pct_before\": " + pct_or_null(report.recipient_u_before) + ",\n";
    out += "  \"total_value_cents_after\": " + std::to_string(report.total_value_after) + ",\n";
    out += "  \"total_value_cents_before\": " + std::to_string(report.total_value_before) + "\n";
    out += "}\n";
    return out;
}

} // namespace chequenet
