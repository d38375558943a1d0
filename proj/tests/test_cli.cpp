#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "chequenet/chequenet.hpp"
#include "test_support.hpp"

using namespace chequenet;
namespace ts = testsupport;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

const std::string& cli_path() {
    static const std::string path = CHEQUENET_CLI_PATH;
    return path;
}

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("chequenet_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << content;
}

// Runs the CLI through the shell, capturing exit code, stdout and stderr.
// `env_prefix` lets individual tests export variables for one invocation.
CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    static std::atomic<int> counter{0};
    int n = counter++;
    fs::path out_file = work_dir() / ("out_" + std::to_string(n) + ".txt");
    fs::path err_file = work_dir() / ("err_" + std::to_string(n) + ".txt");
    std::string command = env_prefix + "\"" + cli_path() + "\" " + args + " > \"" +
                          out_file.string() + "\" 2> \"" + err_file.string() + "\"";
    int status = std::system(command.c_str());
    CliResult result;
    result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_file);
    result.err = slurp(err_file);
    return result;
}

// The CLI echoes its full command line into reports; reproduce it here.
std::string invocation_of(const std::string& args) { return cli_path() + " " + args; }

const std::string& six_csv() {
    static const std::string path = [] {
        fs::path p = work_dir() / "six.csv";
        spit(p, cheque_csv(ts::cheques_from(ts::six_node_edges())));
        return p.string();
    }();
    return path;
}

const std::string& fixture_csv() {
    static const std::string path = [] {
        fs::path p = work_dir() / "fixture.csv";
        spit(p, cheque_csv(ts::cheques_from(ts::rank_fixture_edges())));
        return p.string();
    }();
    return path;
}

} // namespace

TEST_CASE("ingest emits the canonical snapshot") {
    auto net = ts::make_network(ts::six_node_edges());
    CliResult r = run_cli("ingest " + six_csv());
    REQUIRE(r.code == 0);
    REQUIRE(r.out == snapshot_json(net));

    SECTION("-o writes the same bytes to a file") {
        fs::path out = work_dir() / "six.json";
        CliResult w = run_cli("ingest " + six_csv() + " -o " + out.string());
        REQUIRE(w.code == 0);
        REQUIRE(w.out.empty());
        REQUIRE(slurp(out) == snapshot_json(net));
    }
}

TEST_CASE("cascade reports the walkthrough result and echoes its invocation") {
    std::string args = "cascade " + six_csv() + " --c-bp 5000 --seeds 1";
    CliResult r = run_cli(args);
    REQUIRE(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc["total_loss_pct"] == 70.0);
    REQUIRE(doc["adjusted_loss_pct"] == 27.5);
    REQUIRE(doc["stages"].size() == 3);
    REQUIRE(doc["invocation"] == invocation_of(args));

    SECTION("snapshot input gives identical results") {
        fs::path snap = work_dir() / "six_for_cascade.json";
        spit(snap, snapshot_json(ts::make_network(ts::six_node_edges())));
        CliResult s = run_cli("cascade " + snap.string() + " --c-bp 5000 --seeds 1");
        REQUIRE(s.code == 0);
        auto doc2 = nlohmann::json::parse(s.out);
        REQUIRE(doc2["total_loss_pct"] == 70.0);
        REQUIRE(doc2["stages"] == doc["stages"]);
    }
    SECTION("--max-stages truncates the simulation") {
        CliResult t = run_cli("cascade " + six_csv() +
                              " --c-bp 5000 --seeds 1 --max-stages 1");
        REQUIRE(t.code == 0);
        auto doc3 = nlohmann::json::parse(t.out);
        REQUIRE(doc3["stages"].size() == 2);
    }
    SECTION("--seeds-top-wod picks the heaviest issuer") {
        CliResult t = run_cli("cascade " + six_csv() + " --c-bp 5000 --seeds-top-wod 1");
        REQUIRE(t.code == 0);
        auto doc4 = nlohmann::json::parse(t.out);
        REQUIRE(doc4["seeds"] == nlohmann::json::array({"1"}));
    }
}

TEST_CASE("identical invocations produce identical bytes") {
    std::string cascade_args = "cascade " + six_csv() + " --c-bp 5000 --seeds 1,3";
    REQUIRE(run_cli(cascade_args).out == run_cli(cascade_args).out);

    std::string rank_args = "rank " + fixture_csv() + " --metric adjusted --top 5";
    REQUIRE(run_cli(rank_args).out == run_cli(rank_args).out);

    std::string gen_args = "generate --nodes 30 --funded 5 --edges 35 --rng-seed 7";
    std::string first = run_cli(gen_args).out;
    REQUIRE_FALSE(first.empty());
    REQUIRE(first == run_cli(gen_args).out);

    std::string dist_args = "distribution " + six_csv() +
                            " --candidates 1,3,5 --p 0.3 --mode monte-carlo --draws 2000 "
                            "--rng-seed 11";
    REQUIRE(run_cli(dist_args).out == run_cli(dist_args).out);
}

TEST_CASE("rank subcommand puts the metric flip on the command line") {
    CliResult uniform =
        run_cli("rank " + fixture_csv() + " --metric uniform --top 3 --c-bp 5000");
    REQUIRE(uniform.code == 0);
    REQUIRE(uniform.out.find("1,1005,") != std::string::npos);
    REQUIRE(uniform.out.find("2,1029,") != std::string::npos);
    REQUIRE(uniform.out.find("3,1011,") != std::string::npos);

    CliResult adjusted =
        run_cli("rank " + fixture_csv() + " --metric adjusted --top 3 --c-bp 5000");
    REQUIRE(adjusted.code == 0);
    REQUIRE(adjusted.out.find("1,1005,") != std::string::npos);
    REQUIRE(adjusted.out.find("2,1011,") != std::string::npos);
    REQUIRE(adjusted.out.find("3,1029,") != std::string::npos);

    SECTION("--raw renames the value columns") {
        CliResult raw = run_cli("rank " + six_csv() + " --metric uniform --top 1 --raw");
        REQUIRE(raw.code == 0);
        REQUIRE(raw.out.find("metric_value_frac") != std::string::npos);
        REQUIRE(raw.out.find("1,1,0.7000000000,") != std::string::npos);
    }
}

TEST_CASE("distribution subcommand matches the library's exact table") {
    std::string args = "distribution " + six_csv() +
                       " --candidates 1,3 --p 0.5 --mode exact --c-bp 5000";
    CliResult r = run_cli(args);
    REQUIRE(r.code == 0);
    std::string expected_body =
        "loss_pct,probability\n"
        "0.0000,0.25\n"
        "8.0000,0.25\n"
        "70.0000,0.25\n"
        "78.0000,0.25\n"
        "# expected_loss_pct: 39.0000\n";
    REQUIRE(r.out == "# invocation: " + invocation_of(args) + "\n" + expected_body);

    SECTION("a probability file replaces the uniform --p") {
        fs::path prob = work_dir() / "prob.csv";
        spit(prob, "customer_id,p\n1,0.5\n3,0.5\n");
        CliResult p = run_cli("distribution " + six_csv() + " --candidates 1,3 " +
                              "--probabilities " + prob.string() + " --mode exact --c-bp 5000");
        REQUIRE(p.code == 0);
        REQUIRE(p.out.find("# expected_loss_pct: 39.0000\n") != std::string::npos);
    }
    SECTION("a candidate missing from the file is an input error") {
        fs::path prob = work_dir() / "prob_missing.csv";
        spit(prob, "customer_id,p\n1,0.5\n");
        CliResult p = run_cli("distribution " + six_csv() + " --candidates 1,3 " +
                              "--probabilities " + prob.string() + " --mode exact");
        REQUIRE(p.code == 2);
        REQUIRE(p.err.find("no failure probability supplied") != std::string::npos);
    }
}

TEST_CASE("cascade frames land in the requested directory") {
    fs::path frames = work_dir() / "frames";
    CliResult r = run_cli("cascade " + six_csv() + " --c-bp 5000 --seeds 1 --frames " +
                          frames.string());
    REQUIRE(r.code == 0);
    REQUIRE(fs::exists(frames / "stage_000.dot"));
    REQUIRE(fs::exists(frames / "stage_001.dot"));
    REQUIRE(fs::exists(frames / "stage_002.dot"));
    REQUIRE_FALSE(fs::exists(frames / "stage_003.dot"));
    std::string frame1 = slurp(frames / "stage_001.dot");
    REQUIRE(frame1.find("penwidth=2.50") != std::string::npos);
    REQUIRE(frame1.find("digraph collateral_stage_1") != std::string::npos);
}

TEST_CASE("export round-trips through both formats") {
    std::string ingested = run_cli("ingest " + six_csv()).out;
    CliResult json = run_cli("export " + six_csv() + " --format json");
    REQUIRE(json.code == 0);
    REQUIRE(json.out == ingested);

    CliResult dot = run_cli("export " + six_csv() + " --format dot");
    REQUIRE(dot.code == 0);
    REQUIRE(dot.out.find("digraph collateral {") != std::string::npos);
    REQUIRE(dot.out.find("\"1\" -> \"2\" [label=\"20.00%\", penwidth=10.00];") !=
            std::string::npos);
}

TEST_CASE("generate emits cheques whose ingest equals its own snapshot") {
    fs::path csv = work_dir() / "gen.csv";
    fs::path snap = work_dir() / "gen.json";
    CliResult g = run_cli("generate --nodes 30 --funded 5 --edges 35 --rng-seed 7 -o " +
                          csv.string() + " --snapshot " + snap.string());
    REQUIRE(g.code == 0);
    CliResult ingest = run_cli("ingest " + csv.string());
    REQUIRE(ingest.code == 0);
    REQUIRE(ingest.out == slurp(snap));
}

TEST_CASE("relative outputs land in CHEQUENET_OUT_DIR") {
    fs::path dir = work_dir() / "outdir";
    fs::create_directories(dir);
    CliResult r = run_cli("ingest " + six_csv() + " -o rel_snapshot.json",
                          "CHEQUENET_OUT_DIR=\"" + dir.string() + "\" ");
    REQUIRE(r.code == 0);
    REQUIRE(fs::exists(dir / "rel_snapshot.json"));
    REQUIRE(slurp(dir / "rel_snapshot.json") ==
            snapshot_json(ts::make_network(ts::six_node_edges())));
}

TEST_CASE("stats subcommand prints the descriptive block") {
    CliResult r = run_cli("stats " + six_csv() + " --top 2");
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("nodes                 6\n") != std::string::npos);
    REQUIRE(r.out.find("1  4  50.00%\n") != std::string::npos);
    REQUIRE(r.out.find("top betweenness (directed)\n") != std::string::npos);

    CliResult u = run_cli("stats " + six_csv() + " --top 2 --undirected");
    REQUIRE(u.code == 0);
    REQUIRE(u.out.find("top betweenness (undirected)\n") != std::string::npos);
}

TEST_CASE("whatif subcommand reports both sides") {
    CliResult r = run_cli("whatif " + six_csv() +
                          " --issuer 5 --recipient 4 --value-cents 1000 --c-bp 5000");
    REQUIRE(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc["recipient_u_pct_before"] == 25.0);
    REQUIRE(doc["total_value_cents_after"] == 11000);
}

TEST_CASE("failure modes map to documented exit codes") {
    SECTION("unknown seed id") {
        CliResult r = run_cli("cascade " + six_csv() + " --c-bp 5000 --seeds zzz");
        REQUIRE(r.code == 2);
        REQUIRE(r.err.find("error: unknown customer id: zzz") != std::string::npos);
    }
    SECTION("c outside its domain") {
        CliResult r = run_cli("cascade " + six_csv() + " --c-bp 0 --seeds 1");
        REQUIRE(r.code == 2);
        REQUIRE(r.err.find("basis points") != std::string::npos);
    }
    SECTION("missing required option") {
        CliResult r = run_cli("cascade " + six_csv() + " --seeds 1");
        REQUIRE(r.code == 2);
    }
    SECTION("mutually exclusive seed selectors") {
        CliResult r = run_cli("cascade " + six_csv() +
                              " --c-bp 5000 --seeds 1 --seeds-top-wod 2");
        REQUIRE(r.code == 2);
    }
    SECTION("exact enumeration over too many candidates") {
        std::string csv_text = std::string(kChequeCsvHeader) + "\n";
        std::string candidates;
        for (int i = 1; i <= 21; ++i) {
            std::string id = "A" + std::to_string(i);
            csv_text += "c" + std::to_string(i) + "," + id + ",B,100,,\n";
            candidates += (i > 1 ? "," : "") + id;
        }
        fs::path wide = work_dir() / "wide.csv";
        spit(wide, csv_text);
        CliResult r = run_cli("distribution " + wide.string() + " --candidates " +
                              candidates + " --mode exact");
        REQUIRE(r.code == 3);
        REQUIRE(r.err.find("infeasible:") != std::string::npos);
    }
    SECTION("sampling without an explicit seed") {
        CliResult r = run_cli("distribution " + six_csv() +
                              " --candidates 1,3 --mode monte-carlo");
        REQUIRE(r.code == 2);
        REQUIRE(r.err.find("requires an explicit --rng-seed") != std::string::npos);
    }
    SECTION("no candidates at all") {
        CliResult r = run_cli("distribution " + six_csv() + " --mode exact");
        REQUIRE(r.code == 2);
        REQUIRE(r.err.find("no candidates") != std::string::npos);
    }
    SECTION("worthless prospective cheque") {
        CliResult r = run_cli("whatif " + six_csv() +
                              " --issuer 5 --recipient 4 --value-cents 0");
        REQUIRE(r.code == 2);
    }
    SECTION("empty cheque file") {
        fs::path empty = work_dir() / "empty.csv";
        spit(empty, "");
        CliResult r = run_cli("ingest " + empty.string());
        REQUIRE(r.code == 2);
        REQUIRE(r.err.find("empty network") != std::string::npos);
    }
    SECTION("missing input file") {
        CliResult r = run_cli("ingest " + (work_dir() / "missing.csv").string());
        REQUIRE(r.code == 2);
        REQUIRE(r.err.find("cannot open") != std::string::npos);
    }
    SECTION("no subcommand") {
        CliResult r = run_cli("");
        REQUIRE(r.code == 2);
    }
    SECTION("--help exits cleanly") {
        CliResult r = run_cli("--help");
        REQUIRE(r.code == 0);
        REQUIRE(r.out.find("ingest") != std::string::npos);
    }
    SECTION("infeasible generation") {
        CliResult r = run_cli("generate --nodes 10 --funded 0 --edges 5");
        REQUIRE(r.code == 3);
        REQUIRE(r.err.find("infeasible:") != std::string::npos);
    }
}
