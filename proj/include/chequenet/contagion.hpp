#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "chequenet/errors.hpp"
#include "chequenet/network.hpp"

namespace chequenet {

// Failure fraction c is carried as integer basis points so that every
// threshold comparison can run in exact integer arithmetic.
struct ContagionConfig {
    int c_bp = 5000;                // c in basis points, (0, 10000]
    std::vector<std::string> seeds; // customer ids failing at stage 0
    std::size_t max_stages = 0;     // rounds after stage 0; 0 means node count
};

struct CascadeStage {
    std::vector<NodeId> newly_failed; // ascending canonical order
    Cents loss = 0;                   // value of cheques issued by the newly failed
};

struct CascadeResult {
    int c_bp = 0;
    std::vector<NodeId> seeds; // ascending, deduplicated
    std::vector<CascadeStage> stages;
    std::vector<char> failed; // indexed by node
    Cents total_loss = 0;
    Cents total_value = 0;

    bool has_failed(NodeId v) const { return failed[v] != 0; }

    std::size_t failed_count() const {
        std::size_t n = 0;
        for (char f : failed) n += f != 0;
        return n;
    }
};

inline void validate_c_bp(int c_bp) {
    if (c_bp <= 0 || c_bp > 10000)
        throw invalid_input("c must be in (0, 10000] basis points, got " +
                            std::to_string(c_bp));
}

// Threshold fraction u_j = (c/10000) · weighted in-degree of j; constant
// across stages. This is the reporting-side value — the cascade itself never
// materializes it, comparing integer cents × basis points instead.
inline double threshold_fraction(const CollateralNetwork& net, int c_bp, NodeId j) {
    return static_cast<double>(c_bp) / 10000.0 * net.weighted_in_degree(j);
}

inline std::map<std::string, double> failure_thresholds(const CollateralNetwork& net,
                                                        int c_bp) {
    validate_c_bp(c_bp);
    std::map<std::string, double> u;
    for (NodeId v = 0; v < net.node_count(); ++v)
        u[net.id_of(v)] = threshold_fraction(net, c_bp, v);
    return u;
}

// Synchronous threshold cascade. Stage 0 fails the seeds unconditionally; at
// every later stage, each surviving customer j fails iff its defaulted
// incoming exposure is positive and, in exact integers,
//   (Σ_{i failed} d_ij) · 10000 ≥ c_bp · (Σ_i d_ij).
// Ties fail (the "≥"), and a node with no incoming cheques can only fail as
// a seed. All newly failed nodes of a stage are added simultaneously, which
// makes the fixpoint unique. Each node's issued cheques are charged as loss
// once, at the stage the node fails.
inline CascadeResult run_cascade(const CollateralNetwork& net, const ContagionConfig& config) {
    validate_c_bp(config.c_bp);
    std::set<NodeId> seed_set;
    for (const std::string& id : config.seeds) seed_set.insert(net.require(id));

    const std::size_t n = net.node_count();
    const std::size_t max_stages = config.max_stages > 0 ? config.max_stages : n;

    CascadeResult result;
    result.c_bp = config.c_bp;
    result.seeds.assign(seed_set.begin(), seed_set.end());
    result.failed.assign(n, 0);
    result.total_value = net.total_value();

    std::vector<Cents> defaulted_in(n, 0);

    CascadeStage stage0;
    stage0.newly_failed = result.seeds;
    for (NodeId v : stage0.newly_failed) {
        result.failed[v] = 1;
        stage0.loss += net.out_value(v);
    }
    result.total_loss += stage0.loss;
    result.stages.push_back(std::move(stage0));
    if (result.seeds.empty()) return result;

    std::vector<NodeId> last_failed = result.stages.back().newly_failed;
    for (std::size_t round = 1; round <= max_stages && !last_failed.empty(); ++round) {
        // Credit this round's defaulted exposure first, then evaluate: the
        // update is simultaneous across the whole stage.
        std::set<NodeId> touched;
        for (NodeId v : last_failed)
            for (const EdgeRef& e : net.out_edges(v)) {
                defaulted_in[e.peer] += e.value;
                if (!result.failed[e.peer]) touched.insert(e.peer);
            }

        CascadeStage stage;
        for (NodeId j : touched) {
            if (defaulted_in[j] <= 0) continue;
            __int128 lhs = static_cast<__int128>(defaulted_in[j]) * 10000;
            __int128 rhs = static_cast<__int128>(config.c_bp) * net.in_value(j);
            if (lhs >= rhs) stage.newly_failed.push_back(j);
        }
        if (stage.newly_failed.empty()) break;

        for (NodeId v : stage.newly_failed) {
            result.failed[v] = 1;
            stage.loss += net.out_value(v);
        }
        result.total_loss += stage.loss;
        last_failed = stage.newly_failed;
        result.stages.push_back(std::move(stage));
    }
    return result;
}

inline std::vector<double> stage_losses(const CascadeResult& result) {
    std::vector<double> out;
    out.reserve(result.stages.size());
    for (const CascadeStage& s : result.stages)
        out.push_back(result.total_value > 0
                          ? static_cast<double>(s.loss) / static_cast<double>(result.total_value)
                          : 0.0);
    return out;
}

inline double total_uniform_loss(const CascadeResult& result) {
    return result.total_value > 0
               ? static_cast<double>(result.total_loss) / static_cast<double>(result.total_value)
               : 0.0;
}

// Early-stage-weighted loss: stage k contributes loss_k / 2^(k+1), so damage
// done sooner counts more and the total never exceeds half the uniform loss.
inline double adjusted_loss(const CascadeResult& result) {
    double total = 0.0;
    double scale = 0.5;
    for (const CascadeStage& s : result.stages) {
        if (result.total_value > 0)
            total += static_cast<double>(s.loss) / static_cast<double>(result.total_value) * scale;
        scale *= 0.5;
    }
    return total;
}

// The m customers with the largest weighted out-degree; ties go to the
// lexicographically smaller id (canonical order).
inline std::vector<std::string> top_seeds_by_weighted_out_degree(const CollateralNetwork& net,
                                                                 std::size_t m) {
    if (m < 1 || m > net.node_count())
        throw invalid_input("seed count must be in [1, " + std::to_string(net.node_count()) +
                            "], got " + std::to_string(m));
    std::vector<NodeId> order(net.node_count());
    for (NodeId v = 0; v < net.node_count(); ++v) order[v] = v;
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        return net.out_value(a) > net.out_value(b);
    });
    std::vector<std::string> seeds;
    seeds.reserve(m);
    for (std::size_t i = 0; i < m; ++i) seeds.push_back(net.id_of(order[i]));
    return seeds;
}

} // namespace chequenet
