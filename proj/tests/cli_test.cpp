// Copyright 2026 The judgecal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#ifndef JUDGECAL_CLI_PATH
#error "JUDGECAL_CLI_PATH must point at the command-line binary"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("judgecal-cli-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int counter() {
        static int value = 0;
        return value++;
    }
    std::string file(const std::string& name) const {
        return (path / name).string();
    }
};

// Runs the binary, captures combined stdout/stderr, returns the exit code.
int run_cli(const std::string& args, std::string* output = nullptr,
            const std::string& env_prefix = "") {
    TempDir scratch;
    const std::string log = scratch.file("log.txt");
    const std::string command = env_prefix + std::string(JUDGECAL_CLI_PATH) +
                                " " + args + " > " + log + " 2>&1";
    const int status = std::system(command.c_str());
    if (output) {
        std::ifstream in(log, std::ios::binary);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        *output = buffer.str();
    }
    if (status == -1) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

// Simulates a small corpus once and hands back the directory.
void simulate_into(const TempDir& dir, const std::string& extra = "",
                   int items = 200, int votes = 8, int seed = 42) {
    const int code = run_cli("simulate --out-dir " + dir.path.string() +
                             " --items " + std::to_string(items) +
                             " --votes-per-item " + std::to_string(votes) +
                             " --seed " + std::to_string(seed) + " " + extra);
    REQUIRE(code == 0);
}

}  // namespace

TEST_CASE("simulate: deterministic outputs with a manifest") {
    TempDir a, b;
    simulate_into(a);
    simulate_into(b);
    CHECK(slurp(a.file("votes.jsonl")) == slurp(b.file("votes.jsonl")));
    CHECK(slurp(a.file("labels.jsonl")) == slurp(b.file("labels.jsonl")));
    CHECK(slurp(a.file("truth_dists.jsonl")) ==
          slurp(b.file("truth_dists.jsonl")));
    CHECK(slurp(a.file("manifest.json")) == slurp(b.file("manifest.json")));

    const json manifest = json::parse(slurp(a.file("manifest.json")));
    CHECK(manifest["command"] == "simulate");
    CHECK(manifest["seed"] == 42);
    CHECK(manifest.contains("tool_version"));
    CHECK(manifest.contains("config"));
}

TEST_CASE("simulate: rejects a zero item count") {
    TempDir dir;
    std::string output;
    const int code = run_cli(
        "simulate --out-dir " + dir.path.string() +
            " --items 0 --votes-per-item 4 --seed 1",
        &output);
    CHECK(code == 1);
    CHECK(output.find("error") != std::string::npos);
}

TEST_CASE("seed defaults to the environment variable") {
    TempDir a, b;
    int code = run_cli("simulate --out-dir " + a.path.string() +
                           " --items 50 --votes-per-item 4",
                       nullptr, "JUDGECAL_SEED=123 ");
    REQUIRE(code == 0);
    code = run_cli("simulate --out-dir " + b.path.string() +
                   " --items 50 --votes-per-item 4 --seed 123");
    REQUIRE(code == 0);
    CHECK(slurp(a.file("votes.jsonl")) == slurp(b.file("votes.jsonl")));
    const json manifest = json::parse(slurp(a.file("manifest.json")));
    CHECK(manifest["seed"] == 123);
}

TEST_CASE("calibrate: params file, restart table, reproducibility") {
    TempDir sim, cal_a, cal_b;
    simulate_into(sim);
    std::string output;
    int code = run_cli("calibrate --votes " + sim.file("votes.jsonl") +
                           " --labels " + sim.file("labels.jsonl") +
                           " --out-dir " + cal_a.path.string() + " --seed 7",
                       &output);
    REQUIRE(code == 0);
    // Restart table on stdout: header plus eight restart rows.
    CHECK(output.find("restart,start_beta") != std::string::npos);
    CHECK(output.find("selected restart") != std::string::npos);

    const json params = json::parse(slurp(cal_a.file("params.json")));
    REQUIRE(params.is_object());
    CHECK(params.size() == 5);
    for (const char* key :
         {"beta", "nu", "gamma", "objective", "converged"}) {
        CHECK(params.contains(key));
    }
    CHECK(params["beta"].is_number());
    CHECK(params["converged"].is_boolean());

    code = run_cli("calibrate --votes " + sim.file("votes.jsonl") +
                   " --labels " + sim.file("labels.jsonl") + " --out-dir " +
                   cal_b.path.string() + " --seed 7");
    REQUIRE(code == 0);
    CHECK(slurp(cal_a.file("params.json")) ==
          slurp(cal_b.file("params.json")));
    CHECK(slurp(cal_a.file("restarts.csv")) ==
          slurp(cal_b.file("restarts.csv")));

    // Restart count is configurable.
    TempDir cal_c;
    std::string single;
    code = run_cli("calibrate --votes " + sim.file("votes.jsonl") +
                       " --labels " + sim.file("labels.jsonl") +
                       " --out-dir " + cal_c.path.string() +
                       " --seed 7 --restarts 1",
                   &single);
    REQUIRE(code == 0);
    std::istringstream lines(slurp(cal_c.file("restarts.csv")));
    std::string line;
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 2);  // header + one restart
}

TEST_CASE("calibrate: a voted item without a label is an error naming it") {
    TempDir dir;
    write_file(dir.file("votes.jsonl"),
               R"({"item_id":"lonely","order":"AB","label":1})"
               "\n");
    write_file(dir.file("labels.jsonl"),
               R"({"item_id":"other","label":1})"
               "\n");
    std::string output;
    const int code = run_cli(
        "calibrate --votes " + dir.file("votes.jsonl") + " --labels " +
            dir.file("labels.jsonl") + " --out-dir " + dir.path.string(),
        &output);
    CHECK(code == 1);
    CHECK(output.find("lonely") != std::string::npos);
}

TEST_CASE("calibrate: objective in params file matches the library fit") {
    TempDir sim, cal;
    simulate_into(sim, "", 120, 6, 5);
    const int code = run_cli(
        "calibrate --votes " + sim.file("votes.jsonl") + " --labels " +
        sim.file("labels.jsonl") + " --out-dir " + cal.path.string() +
        " --seed 31");
    REQUIRE(code == 0);
    const json params = json::parse(slurp(cal.file("params.json")));
    // The acceptance harness cross-checks the numbers against the in-process
    // fit; here, assert internal consistency of the emitted objective.
    const double beta = params["beta"];
    const double nu = params["nu"];
    CHECK(beta >= 1e-3);
    CHECK(beta <= 5.0);
    CHECK(nu >= 1e-4);
    CHECK(nu <= 1e3);
    CHECK(params["objective"].get<double>() >= 0.0);
}

TEST_CASE("aggregate: btd emits probabilities, baselines labels only") {
    TempDir sim, cal, agg_btd, agg_sc;
    simulate_into(sim);
    REQUIRE(run_cli("calibrate --votes " + sim.file("votes.jsonl") +
                    " --labels " + sim.file("labels.jsonl") + " --out-dir " +
                    cal.path.string() + " --seed 7") == 0);
    REQUIRE(run_cli("aggregate --votes " + sim.file("votes.jsonl") +
                    " --params " + cal.file("params.json") + " --out-dir " +
                    agg_btd.path.string() + " --method btd") == 0);
    REQUIRE(run_cli("aggregate --votes " + sim.file("votes.jsonl") +
                    " --out-dir " + agg_sc.path.string() +
                    " --method sc") == 0);

    std::istringstream btd_lines(slurp(agg_btd.file("predictions.jsonl")));
    std::string line;
    int count = 0;
    while (std::getline(btd_lines, line)) {
        const json record = json::parse(line);
        CHECK(record.contains("p_minus"));
        CHECK(record.contains("p_tie"));
        CHECK(record.contains("p_plus"));
        ++count;
    }
    CHECK(count == 200);

    std::istringstream sc_lines(slurp(agg_sc.file("predictions.jsonl")));
    while (std::getline(sc_lines, line)) {
        const json record = json::parse(line);
        CHECK_FALSE(record.contains("p_minus"));
        CHECK(record.contains("label"));
    }
}

TEST_CASE("aggregate: majority verdict on a hand-built tally") {
    TempDir dir;
    std::ostringstream votes;
    for (int i = 0; i < 5; ++i) {
        votes << R"({"item_id":"x","order":"AB","label":1})"
              << "\n";
    }
    for (int i = 0; i < 4; ++i) {
        votes << R"({"item_id":"x","order":"AB","label":-1})"
              << "\n";
    }
    write_file(dir.file("votes.jsonl"), votes.str());
    REQUIRE(run_cli("aggregate --votes " + dir.file("votes.jsonl") +
                    " --out-dir " + dir.path.string() +
                    " --method sc") == 0);
    const json record =
        json::parse(slurp(dir.file("predictions.jsonl")));
    CHECK(record["label"] == 1);
}

TEST_CASE("aggregate: saturated tie propensity widens the tie band") {
    TempDir dir;
    std::ostringstream votes;
    for (int i = 0; i < 9; ++i) {
        votes << R"({"item_id":"y","order":"AB","label":1})"
              << "\n";
    }
    for (int i = 0; i < 9; ++i) {
        votes << R"({"item_id":"y","order":"AB","label":-1})"
              << "\n";
    }
    votes << R"({"item_id":"y","order":"AB","label":0})"
          << "\n"
          << R"({"item_id":"y","order":"AB","label":0})"
          << "\n";
    write_file(dir.file("votes.jsonl"), votes.str());
    write_file(dir.file("params.json"),
               R"({"beta":1.0,"nu":1000.0,"gamma":1.0,)"
               R"("objective":0.0,"converged":true})"
               "\n");
    REQUIRE(run_cli("aggregate --votes " + dir.file("votes.jsonl") +
                    " --params " + dir.file("params.json") + " --out-dir " +
                    dir.path.string() + " --method btd") == 0);
    const json record = json::parse(slurp(dir.file("predictions.jsonl")));
    CHECK(record["label"] == 0);
}

TEST_CASE("aggregate: btd without params and empty votes both fail") {
    TempDir dir;
    write_file(dir.file("votes.jsonl"),
               R"({"item_id":"x","order":"AB","label":1})"
               "\n");
    std::string output;
    int code = run_cli("aggregate --votes " + dir.file("votes.jsonl") +
                           " --out-dir " + dir.path.string() +
                           " --method btd",
                       &output);
    CHECK(code == 1);
    CHECK(output.find("--params") != std::string::npos);

    write_file(dir.file("empty.jsonl"), "");
    code = run_cli("aggregate --votes " + dir.file("empty.jsonl") +
                   " --out-dir " + dir.path.string() + " --method sc");
    CHECK(code == 1);
}

TEST_CASE("aggregate: confidence-weighted methods demand confidences") {
    TempDir dir;
    write_file(dir.file("votes.jsonl"),
               R"({"item_id":"x","order":"AB","label":1})"
               "\n");
    std::string output;
    const int code = run_cli("aggregate --votes " + dir.file("votes.jsonl") +
                                 " --out-dir " + dir.path.string() +
                                 " --method soft-sc",
                             &output);
    CHECK(code == 1);
    CHECK(output.find("confidence") != std::string::npos);
}

TEST_CASE("evaluate: summary schema, p-values, and determinism") {
    TempDir sim, ev_a, ev_b;
    simulate_into(sim, "", 300, 8, 9);
    const std::string args =
        "evaluate --votes " + sim.file("votes.jsonl") + " --labels " +
        sim.file("labels.jsonl") + " --methods btd,sc --ratio 0.1 "
        "--splits 12 --resamples 50 --seed 4 --out-dir ";
    REQUIRE(run_cli(args + ev_a.path.string()) == 0);
    REQUIRE(run_cli(args + ev_b.path.string()) == 0);
    CHECK(slurp(ev_a.file("splits.csv")) == slurp(ev_b.file("splits.csv")));
    CHECK(slurp(ev_a.file("summary.json")) ==
          slurp(ev_b.file("summary.json")));

    const json summary = json::parse(slurp(ev_a.file("summary.json")));
    CHECK(summary["methods"] == json::array({"btd", "sc"}));
    CHECK(summary["num_splits"] == 12);
    for (const char* metric : {"mae", "pa"}) {
        const json& block = summary[metric];
        CHECK(block["mean"].size() == 2);
        CHECK(block["ci95_half_width"].size() == 2);
        CHECK(block["p_values"].size() == 2);
        CHECK(block["p_values"][0][0] == 1.0);
        CHECK(block["p_values"][0][1] == block["p_values"][1][0]);
        CHECK(block["ranking"].size() == 2);
        CHECK(block["top_cluster"].size() >= 1);
    }

    // splits.csv: header + methods * splits rows.
    std::istringstream lines(slurp(ev_a.file("splits.csv")));
    std::string line;
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 1 + 2 * 12);
}

TEST_CASE("evaluate: duplicate method binding shares the top cluster") {
    TempDir sim, ev;
    simulate_into(sim, "", 200, 6, 10);
    REQUIRE(run_cli("evaluate --votes " + sim.file("votes.jsonl") +
                    " --labels " + sim.file("labels.jsonl") +
                    " --methods sc,sc --ratio 0.1 --splits 6 "
                    "--resamples 40 --seed 2 --out-dir " +
                    ev.path.string()) == 0);
    const json summary = json::parse(slurp(ev.file("summary.json")));
    CHECK(summary["mae"]["p_values"][0][1] == 1.0);
    CHECK(summary["mae"]["top_cluster"].size() == 2);
    const json& ranking = summary["mae"]["ranking"];
    for (const auto& [id, entry] : ranking.items()) {
        CHECK(entry["rank"] == 1);
        CHECK(entry["in_top_cluster"] == true);
    }
}

TEST_CASE("evaluate: single method forms a trivial cluster") {
    TempDir sim, ev;
    simulate_into(sim, "", 150, 6, 12);
    REQUIRE(run_cli("evaluate --votes " + sim.file("votes.jsonl") +
                    " --labels " + sim.file("labels.jsonl") +
                    " --methods sc --ratio 0.1 --splits 5 --seed 2"
                    " --out-dir " +
                    ev.path.string()) == 0);
    const json summary = json::parse(slurp(ev.file("summary.json")));
    CHECK(summary["mae"]["top_cluster"] == json::array({"sc"}));
}

TEST_CASE("regions: n=1 gives three cells matching the single vote") {
    TempDir dir;
    REQUIRE(run_cli("regions --out-dir " + dir.path.string() + " --n 1") ==
            0);
    const std::string csv = slurp(dir.file("regions.csv"));
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "c_plus,c_minus,c_tie,sc,btd");
    std::vector<std::string> rows;
    while (std::getline(lines, line)) rows.push_back(line);
    REQUIRE(rows.size() == 3);
    // (c_plus, c_minus, c_tie) -> sc verdict equals the lone vote.
    CHECK(rows[0].rfind("0,0,1,0", 0) == 0);
    CHECK(rows[1].rfind("0,1,0,-1", 0) == 0);
    CHECK(rows[2].rfind("1,0,0,1", 0) == 0);
}

TEST_CASE("regions: manifest records the parameter point") {
    TempDir dir;
    REQUIRE(run_cli("regions --out-dir " + dir.path.string() +
                    " --n 6 --nu 55.5 --beta 2.0") == 0);
    const json manifest = json::parse(slurp(dir.file("manifest.json")));
    CHECK(manifest["config"]["nu"] == 55.5);
    CHECK(manifest["config"]["beta"] == 2.0);
    CHECK(manifest["command"] == "regions");
}

TEST_CASE("loo: table shape and the too-few-raters contract") {
    TempDir dir;
    std::ostringstream ratings;
    const char* raters[] = {"r1", "r2", "r3"};
    const char* items[] = {"a", "b", "c", "d"};
    for (const char* item : items) {
        for (const char* rater : raters) {
            ratings << R"({"item_id":")" << item << R"(","label":1,)"
                    << R"("rater_id":")" << rater << R"("})"
                    << "\n";
        }
    }
    write_file(dir.file("ratings.jsonl"), ratings.str());
    std::ostringstream preds;
    for (const char* item : items) {
        preds << R"({"item_id":")" << item << R"(","label":1})"
              << "\n";
    }
    write_file(dir.file("predictions.jsonl"), preds.str());
    std::string output;
    REQUIRE(run_cli("loo --ratings " + dir.file("ratings.jsonl") +
                        " --predictions " + dir.file("predictions.jsonl") +
                        " --out-dir " + dir.path.string(),
                    &output) == 0);
    const std::string csv = slurp(dir.file("loo.csv"));
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "rater_id,human_pa,system_pa,win");
    int rows = 0;
    std::string last;
    while (std::getline(lines, line)) {
        last = line;
        ++rows;
    }
    CHECK(rows == 4);  // three raters + the tally row
    CHECK(last.rfind("wins_total", 0) == 0);

    // Two raters only: contract error.
    std::ostringstream two;
    for (const char* item : items) {
        for (const char* rater : {"r1", "r2"}) {
            two << R"({"item_id":")" << item << R"(","label":1,)"
                << R"("rater_id":")" << rater << R"("})"
                << "\n";
        }
    }
    write_file(dir.file("two.jsonl"), two.str());
    const int code = run_cli("loo --ratings " + dir.file("two.jsonl") +
                             " --predictions " +
                             dir.file("predictions.jsonl") + " --out-dir " +
                             dir.path.string());
    CHECK(code == 1);
}

TEST_CASE("order-report and sweep: outputs and shapes") {
    TempDir sim, ord, swp;
    simulate_into(sim, "--order-bias 0.2", 240, 8, 3);
    REQUIRE(run_cli("order-report --votes " + sim.file("votes.jsonl") +
                    " --labels " + sim.file("labels.jsonl") + " --out-dir " +
                    ord.path.string()) == 0);
    const std::string order_csv = slurp(ord.file("order.csv"));
    CHECK(order_csv.find("strategy,mae") != std::string::npos);
    CHECK(order_csv.find("first_only,") != std::string::npos);
    CHECK(order_csv.find("second_only,") != std::string::npos);
    CHECK(order_csv.find("balanced,") != std::string::npos);

    REQUIRE(run_cli("sweep --votes " + sim.file("votes.jsonl") +
                    " --labels " + sim.file("labels.jsonl") +
                    " --sizes 20,40 --splits 4 --seed 6 --out-dir " +
                    swp.path.string()) == 0);
    const std::string sweep_csv = slurp(swp.file("sweep.csv"));
    std::istringstream lines(sweep_csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "size,mean_mae");
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 2);
}

TEST_CASE("transfer: square matrix with a zero diagonal") {
    TempDir sim_a, sim_b, out;
    simulate_into(sim_a, "", 150, 8, 21);
    simulate_into(sim_b, "", 150, 8, 22);
    REQUIRE(run_cli("transfer --task one=" + sim_a.file("votes.jsonl") +
                    "," + sim_a.file("labels.jsonl") + " --task two=" +
                    sim_b.file("votes.jsonl") + "," +
                    sim_b.file("labels.jsonl") +
                    " --ratio 0.1 --splits 4 --seed 13 --out-dir " +
                    out.path.string()) == 0);
    const std::string csv = slurp(out.file("transfer.csv"));
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "source,one,two");
    std::getline(lines, line);
    CHECK(line.rfind("one,0,", 0) == 0);
    std::getline(lines, line);
    CHECK(line.rfind("two,", 0) == 0);
    CHECK(line.substr(line.size() - 2) == ",0");
}

TEST_CASE("manifest digests change exactly when inputs change") {
    TempDir sim, cal_a, cal_b, cal_c;
    simulate_into(sim, "", 100, 6, 8);
    const std::string base = "calibrate --votes " + sim.file("votes.jsonl") +
                             " --labels " + sim.file("labels.jsonl") +
                             " --seed 3 --out-dir ";
    REQUIRE(run_cli(base + cal_a.path.string()) == 0);
    REQUIRE(run_cli(base + cal_b.path.string()) == 0);
    const json manifest_a = json::parse(slurp(cal_a.file("manifest.json")));
    const json manifest_b = json::parse(slurp(cal_b.file("manifest.json")));
    CHECK(manifest_a["inputs"] == manifest_b["inputs"]);

    // Append a blank-insignificant change: a new vote line alters the digest.
    std::ofstream append(sim.file("votes.jsonl"), std::ios::app);
    append << R"({"item_id":"item-000000","order":"AB","label":0})"
           << "\n";
    append.close();
    REQUIRE(run_cli(base + cal_c.path.string()) == 0);
    const json manifest_c = json::parse(slurp(cal_c.file("manifest.json")));
    CHECK(manifest_a["inputs"]["votes"] != manifest_c["inputs"]["votes"]);
    CHECK(manifest_a["inputs"]["labels"] == manifest_c["inputs"]["labels"]);
}

TEST_CASE("parse errors from malformed vote files exit with code 1") {
    TempDir dir;
    write_file(dir.file("votes.jsonl"),
               R"({"item_id":"a","order":"AB","label":1})"
               "\n"
               R"({"item_id":"a","order":"AB","label":2})"
               "\n");
    write_file(dir.file("labels.jsonl"),
               R"({"item_id":"a","label":1})"
               "\n");
    std::string output;
    const int code = run_cli(
        "calibrate --votes " + dir.file("votes.jsonl") + " --labels " +
            dir.file("labels.jsonl") + " --out-dir " + dir.path.string(),
        &output);
    CHECK(code == 1);
    CHECK(output.find(":2:") != std::string::npos);
}

TEST_CASE("unknown subcommand and missing required flags exit with 1") {
    std::string output;
    CHECK(run_cli("frobnicate", &output) == 1);
    CHECK(run_cli("calibrate", &output) == 1);
    CHECK(run_cli("--help", &output) == 0);
}
