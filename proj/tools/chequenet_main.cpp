// Command-line front end: ingestion, statistics, cascade simulation, risk
// ranking, what-if scoring, scenario distributions, synthetic generation and
// export, all with byte-deterministic outputs.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chequenet/chequenet.hpp"

namespace {

using namespace chequenet;

std::string join_invocation(int argc, char** argv) {
    std::string line;
    for (int i = 0; i < argc; ++i) {
        if (i > 0) line += ' ';
        line += argv[i];
    }
    return line;
}

// Relative output paths land in $CHEQUENET_OUT_DIR when it is set.
std::string resolve_output(const std::string& path) {
    const char* dir = std::getenv("CHEQUENET_OUT_DIR");
    if (!dir || *dir == '\0') return path;
    std::filesystem::path p(path);
    if (p.is_absolute()) return path;
    return (std::filesystem::path(dir) / p).string();
}

void emit(const std::string& content, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << content;
        return;
    }
    std::string path = resolve_output(output_path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw invalid_input("cannot write " + path);
    out << content;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(),
                                                  suffix) == 0;
}

// Inputs are sniffed by extension: .json is a canonical snapshot, anything
// else is the raw cheque CSV.
CollateralNetwork load_network(const std::string& path) {
    if (ends_with(path, ".json")) return read_snapshot_file(path);
    return ingest_cheques(read_cheque_csv_file(path));
}

std::vector<std::string> split_ids(const std::string& csv) {
    std::vector<std::string> ids;
    std::size_t start = 0;
    while (start <= csv.size()) {
        std::size_t comma = csv.find(',', start);
        std::string id = comma == std::string::npos ? csv.substr(start)
                                                    : csv.substr(start, comma - start);
        if (!id.empty()) ids.push_back(id);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return ids;
}

struct CommonArgs {
    std::string input;
    std::string output;
    int c_bp = 5000;
    bool raw = false;
};

int run(int argc, char** argv) {
    const std::string invocation = join_invocation(argc, argv);

    CLI::App app{"cheques-as-collateral network analysis"};
    app.require_subcommand(1);

    // ---- ingest ----------------------------------------------------------
    CommonArgs ingest_args;
    CLI::App* cmd_ingest = app.add_subcommand(
        "ingest", "read a cheque CSV and write the canonical network snapshot");
    cmd_ingest->add_option("input", ingest_args.input, "cheque CSV file")->required();
    cmd_ingest->add_option("-o,--output", ingest_args.output,
                           "output file (default: stdout)");

    // ---- stats -----------------------------------------------------------
    CommonArgs stats_args;
    std::size_t stats_top = 5;
    bool stats_undirected = false;
    CLI::App* cmd_stats = app.add_subcommand("stats", "descriptive network statistics");
    cmd_stats->add_option("input", stats_args.input, "snapshot (.json) or cheque CSV")
        ->required();
    cmd_stats->add_option("--top", stats_top, "rows per ranking table (default 5)");
    cmd_stats->add_flag("--undirected", stats_undirected,
                        "compute betweenness on the undirected view");
    cmd_stats->add_flag("--raw", stats_args.raw, "print fractions instead of percentages");
    cmd_stats->add_option("-o,--output", stats_args.output, "output file (default: stdout)");

    // ---- cascade ---------------------------------------------------------
    CommonArgs cascade_args;
    std::string cascade_seeds;
    std::size_t cascade_top_wod = 0;
    std::size_t cascade_max_stages = 0;
    std::string cascade_frames;
    CLI::App* cmd_cascade =
        app.add_subcommand("cascade", "run the stage-wise failure contagion simulation");
    cmd_cascade->add_option("input", cascade_args.input, "snapshot (.json) or cheque CSV")
        ->required();
    cmd_cascade->add_option("--c-bp", cascade_args.c_bp,
                            "failure fraction c in basis points, (0, 10000]")
        ->required();
    CLI::Option* opt_seeds =
        cmd_cascade->add_option("--seeds", cascade_seeds, "comma-separated seed customer ids");
    cmd_cascade
        ->add_option("--seeds-top-wod", cascade_top_wod,
                     "seed the m customers with the highest weighted out-degree")
        ->excludes(opt_seeds);
    cmd_cascade->add_option("--max-stages", cascade_max_stages,
                            "stage cap (default: node count)");
    cmd_cascade->add_option("--frames", cascade_frames,
                            "directory for per-stage DOT frames");
    cmd_cascade->add_flag("--raw", cascade_args.raw, "report fractions instead of percentages");
    cmd_cascade->add_option("-o,--output", cascade_args.output, "output file (default: stdout)");

    // ---- rank ------------------------------------------------------------
    CommonArgs rank_args;
    std::string rank_metric = "adjusted";
    std::size_t rank_top = 5;
    std::size_t rank_depth = 0;
    std::string rank_basis = "cascaded";
    CLI::App* cmd_rank = app.add_subcommand("rank", "rank customers by a risk metric");
    cmd_rank->add_option("input", rank_args.input, "snapshot (.json) or cheque CSV")->required();
    cmd_rank->add_option("--metric", rank_metric, "uniform | adjusted | composite | systemic")
        ->check(CLI::IsMember({"uniform", "adjusted", "composite", "systemic"}));
    cmd_rank->add_option("--c-bp", rank_args.c_bp,
                         "failure fraction c in basis points (default 5000)");
    cmd_rank->add_option("--top", rank_top, "number of rows (default 5)");
    cmd_rank->add_option("--depth", rank_depth,
                         "systemic-risk recursion depth (default: network diameter)");
    cmd_rank->add_option("--loss-basis", rank_basis,
                         "l term of the composite score: cascaded | direct")
        ->check(CLI::IsMember({"cascaded", "direct"}));
    cmd_rank->add_flag("--raw", rank_args.raw, "report fractions instead of percentages");
    cmd_rank->add_option("-o,--output", rank_args.output, "output file (default: stdout)");

    // ---- whatif ----------------------------------------------------------
    CommonArgs whatif_args;
    std::string whatif_issuer, whatif_recipient;
    Cents whatif_value = 0;
    std::size_t whatif_depth = 0;
    CLI::App* cmd_whatif =
        app.add_subcommand("whatif", "score one prospective cheque before accepting it");
    cmd_whatif->add_option("input", whatif_args.input, "snapshot (.json) or cheque CSV")
        ->required();
    cmd_whatif->add_option("--issuer", whatif_issuer, "issuer customer id")->required();
    cmd_whatif->add_option("--recipient", whatif_recipient, "recipient customer id")->required();
    cmd_whatif->add_option("--value-cents", whatif_value, "cheque value in cents")->required();
    cmd_whatif->add_option("--c-bp", whatif_args.c_bp,
                           "failure fraction c in basis points (default 5000)");
    cmd_whatif->add_option("--depth", whatif_depth,
                           "systemic-risk recursion depth (default: network diameter)");
    cmd_whatif->add_option("-o,--output", whatif_args.output, "output file (default: stdout)");

    // ---- distribution ----------------------------------------------------
    CommonArgs dist_args;
    std::string dist_candidates;
    std::size_t dist_top_wod = 0;
    std::string dist_prob_file;
    double dist_p = 0.05;
    std::string dist_mode = "exact";
    std::uint64_t dist_draws = 100000;
    std::uint64_t dist_seed = 0;
    bool dist_seed_given = false;
    CLI::App* cmd_dist =
        app.add_subcommand("distribution", "scenario loss distribution over a candidate set");
    cmd_dist->add_option("input", dist_args.input, "snapshot (.json) or cheque CSV")->required();
    CLI::Option* opt_cand = cmd_dist->add_option("--candidates", dist_candidates,
                                                 "comma-separated candidate customer ids");
    cmd_dist
        ->add_option("--candidates-top-wod", dist_top_wod,
                     "use the m customers with the highest weighted out-degree")
        ->excludes(opt_cand);
    cmd_dist->add_option("--c-bp", dist_args.c_bp,
                         "failure fraction c in basis points (default 5000)");
    cmd_dist->add_option("--probabilities", dist_prob_file,
                         "CSV customer_id,p with failure probabilities");
    cmd_dist->add_option("--p", dist_p,
                         "uniform failure probability when no file is given (default 0.05)");
    cmd_dist->add_option("--mode", dist_mode, "exact | monte-carlo")
        ->check(CLI::IsMember({"exact", "monte-carlo"}));
    cmd_dist->add_option("--draws", dist_draws, "monte-carlo draw count (default 100000)");
    cmd_dist->add_option("--rng-seed", dist_seed, "monte-carlo RNG seed (required for sampling)")
        ->trigger_on_parse()
        ->each([&](const std::string&) { dist_seed_given = true; });
    cmd_dist->add_flag("--raw", dist_args.raw, "report fractions instead of percentages");
    cmd_dist->add_option("-o,--output", dist_args.output, "output file (default: stdout)");

    // ---- generate --------------------------------------------------------
    GeneratorParams gen_params;
    std::string gen_output, gen_snapshot;
    CLI::App* cmd_generate =
        app.add_subcommand("generate", "emit a deterministic synthetic network");
    cmd_generate->add_option("--nodes", gen_params.node_count, "customer count (default 422)");
    cmd_generate->add_option("--funded", gen_params.funded_count,
                             "funded customer count (default 33)");
    cmd_generate->add_option("--edges", gen_params.target_edge_count,
                             "aggregated link count (default 450)");
    cmd_generate->add_option("--alpha", gen_params.power_law_alpha,
                             "in-degree power-law exponent (default 1.3)");
    cmd_generate->add_option("--max-out", gen_params.max_out_degree,
                             "max out-degree (default 3)");
    cmd_generate->add_option("--value-min", gen_params.min_value_cents,
                             "min cheque value in cents");
    cmd_generate->add_option("--value-max", gen_params.max_value_cents,
                             "max cheque value in cents");
    cmd_generate->add_option("--rng-seed", gen_params.rng_seed, "RNG seed (default 1)");
    cmd_generate->add_option("-o,--output", gen_output, "cheque CSV file (default: stdout)");
    cmd_generate->add_option("--snapshot", gen_snapshot,
                             "also write the canonical snapshot here");

    // ---- export ----------------------------------------------------------
    CommonArgs export_args;
    std::string export_format = "json";
    CLI::App* cmd_export =
        app.add_subcommand("export", "write the network as canonical JSON or DOT");
    cmd_export->add_option("input", export_args.input, "snapshot (.json) or cheque CSV")
        ->required();
    cmd_export->add_option("--format", export_format, "json | dot")
        ->check(CLI::IsMember({"json", "dot"}));
    cmd_export->add_option("-o,--output", export_args.output, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (cmd_ingest->parsed()) {
        CollateralNetwork net = ingest_cheques(read_cheque_csv_file(ingest_args.input));
        emit(snapshot_json(net), ingest_args.output);
        return 0;
    }

    if (cmd_stats->parsed()) {
        CollateralNetwork net = load_network(stats_args.input);
        NetworkStats stats = network_stats(net);
        GraphView view = stats_undirected ? GraphView::undirected : GraphView::directed;
        emit(stats_report_text(net, stats, stats_top, view, invocation, stats_args.raw),
             stats_args.output);
        return 0;
    }

    if (cmd_cascade->parsed()) {
        CollateralNetwork net = load_network(cascade_args.input);
        ContagionConfig config;
        config.c_bp = cascade_args.c_bp;
        config.max_stages = cascade_max_stages;
        if (cascade_top_wod > 0)
            config.seeds = top_seeds_by_weighted_out_degree(net, cascade_top_wod);
        else
            config.seeds = split_ids(cascade_seeds);
        CascadeResult result = run_cascade(net, config);
        if (!cascade_frames.empty()) {
            std::filesystem::path dir(resolve_output(cascade_frames));
            std::filesystem::create_directories(dir);
            for (std::size_t k = 0; k < result.stages.size(); ++k) {
                char name[32];
                std::snprintf(name, sizeof(name), "stage_%03zu.dot", k);
                std::ofstream out(dir / name, std::ios::binary);
                if (!out) throw invalid_input("cannot write " + (dir / name).string());
                out << dot_frame(net, result, k, invocation);
            }
        }
        emit(cascade_report_json(net, result, invocation, cascade_args.raw),
             cascade_args.output);
        return 0;
    }

    if (cmd_rank->parsed()) {
        CollateralNetwork net = load_network(rank_args.input);
        RankMetric metric = rank_metric == "uniform"    ? RankMetric::uniform
                            : rank_metric == "adjusted" ? RankMetric::adjusted
                            : rank_metric == "composite" ? RankMetric::composite
                                                          : RankMetric::systemic;
        LossBasis basis = rank_basis == "direct" ? LossBasis::direct : LossBasis::cascaded;
        std::vector<RankEntry> entries =
            rank_customers(net, rank_args.c_bp, metric, rank_top, rank_depth, basis);
        emit(rank_report_csv(net, entries, invocation, rank_args.raw), rank_args.output);
        return 0;
    }

    if (cmd_whatif->parsed()) {
        CollateralNetwork net = load_network(whatif_args.input);
        Cheque cheque;
        cheque.cheque_id = "whatif";
        cheque.issuer_id = whatif_issuer;
        cheque.recipient_id = whatif_recipient;
        cheque.value = whatif_value;
        WhatIfReport report = whatif_add_cheque(net, whatif_args.c_bp, cheque, whatif_depth);
        emit(whatif_report_json(report, whatif_args.c_bp, invocation), whatif_args.output);
        return 0;
    }

    if (cmd_dist->parsed()) {
        CollateralNetwork net = load_network(dist_args.input);
        std::vector<std::string> candidates;
        if (dist_top_wod > 0)
            candidates = top_seeds_by_weighted_out_degree(net, dist_top_wod);
        else
            candidates = split_ids(dist_candidates);
        if (candidates.empty())
            throw invalid_input("no candidates: pass --candidates or --candidates-top-wod");
        std::map<std::string, double> probabilities;
        if (!dist_prob_file.empty()) {
            probabilities = read_probability_csv_file(dist_prob_file);
        } else {
            if (dist_p < 0.0 || dist_p > 1.0)
                throw invalid_input("--p must be in [0, 1]");
            for (const std::string& id : candidates) probabilities[id] = dist_p;
        }
        DistributionMode mode =
            dist_mode == "exact" ? DistributionMode::exact : DistributionMode::monte_carlo;
        if (mode == DistributionMode::monte_carlo && !dist_seed_given)
            throw invalid_input("monte-carlo mode requires an explicit --rng-seed");
        LossDistribution dist = loss_distribution(net, dist_args.c_bp, candidates, probabilities,
                                                  mode, dist_draws, dist_seed);
        emit(distribution_report_csv(dist, invocation, dist_args.raw), dist_args.output);
        return 0;
    }

    if (cmd_generate->parsed()) {
        GeneratedNetwork generated = generate(gen_params);
        if (!gen_snapshot.empty()) {
            std::string path = resolve_output(gen_snapshot);
            std::ofstream out(path, std::ios::binary);
            if (!out) throw invalid_input("cannot write " + path);
            out << snapshot_json(generated.network);
        }
        emit(cheque_csv(generated.cheques), gen_output);
        return 0;
    }

    if (cmd_export->parsed()) {
        CollateralNetwork net = load_network(export_args.input);
        if (export_format == "dot")
            emit(dot_export(net, invocation), export_args.output);
        else
            emit(snapshot_json(net), export_args.output);
        return 0;
    }

    return 2; // unreachable: a subcommand is required
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const chequenet::invalid_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const chequenet::infeasible& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const chequenet::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
