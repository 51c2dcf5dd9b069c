#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "burstsim/bench.hpp"
#include "burstsim/errors.hpp"

using namespace burstsim;
namespace fs = std::filesystem;

namespace {

WorkloadSpec quick(char label) {
    WorkloadSpec w = make_workload(label);
    w.load_count = 500;
    w.run_count = 200;
    return w;
}

/// 2 strategies x 2 workloads x 3 configs, sized to run in milliseconds.
ExperimentMatrix quick_matrix() {
    ExperimentMatrix m;
    m.strategies = {default_strategy(StrategyKind::MasterSlaveAsync),
                    default_strategy(StrategyKind::HashShardedMemory)};
    m.workloads = {quick('C'), quick('A')};
    m.configs = {{8, 0}, {4, 4}, {1, 7}};
    m.seed = 42;
    return m;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("cell ids name strategy, workload, and split") {
    CHECK(cell_id(default_strategy(StrategyKind::QuorumPeer), make_workload('A'),
                  {8, 0}) == "QuorumPeer/A/8_0");
    CHECK(cell_id(default_strategy(StrategyKind::SyncTwoPhase), make_workload('F'),
                  {1, 7}) == "SyncTwoPhase/F/1_7");
}

TEST_CASE("matrix validation refuses ambiguous cells") {
    ExperimentMatrix m = quick_matrix();
    CHECK_NOTHROW(m.validate());
    m.strategies.push_back(default_strategy(StrategyKind::MasterSlaveAsync));
    CHECK_THROWS_AS(m.validate(), ConfigError);

    m = quick_matrix();
    m.workloads.push_back(quick('C'));
    CHECK_THROWS_AS(m.validate(), ConfigError);

    m = quick_matrix();
    m.configs.push_back({8, 0});
    CHECK_THROWS_AS(m.validate(), ConfigError);

    m = quick_matrix();
    m.strategies.clear();
    CHECK_THROWS_AS(m.validate(), ConfigError);

    m = quick_matrix();
    m.repeats = 0;
    CHECK_THROWS_AS(m.validate(), ConfigError);
}

TEST_CASE("a read-only local cell produces clean metrics") {
    ExperimentMatrix m = quick_matrix();
    MetricsRecord r = run_cell(default_strategy(StrategyKind::QuorumPeer),
                               quick('C'), {8, 0}, m);
    CHECK(r.strategy == "QuorumPeer");
    CHECK(r.workload == 'C');
    CHECK(r.config == "8_0");
    CHECK(r.ops_total == 200);
    CHECK(r.error_pct == 0.0);
    CHECK(r.write_mean == 0.0);  // workload C never writes
    CHECK(r.write_p95 == 0.0);
    // hop + second ack + 1 ms service, everything intra-private
    CHECK(r.read_mean > 1.5);
    CHECK(r.read_mean < 3.0);
    CHECK(r.read_p95 >= r.read_mean);
    CHECK(r.throughput > 0.0);
}

TEST_CASE("sweeps visit every cell in axis order") {
    ExperimentMatrix m = quick_matrix();
    SweepResult res = sweep(m);
    CHECK(res.failures.empty());
    REQUIRE(res.records.size() == 12);
    CHECK(res.records[0].strategy == "MasterSlaveAsync");
    CHECK(res.records[0].workload == 'C');
    CHECK(res.records[0].config == "8_0");
    CHECK(res.records[1].config == "4_4");
    CHECK(res.records[2].config == "1_7");
    CHECK(res.records[3].workload == 'A');
    CHECK(res.records[6].strategy == "HashShardedMemory");
}

TEST_CASE("sweeps are reproducible and parallelism-invariant") {
    ExperimentMatrix m = quick_matrix();
    SweepResult once = sweep(m);
    SweepResult twice = sweep(m);
    CHECK(once.records == twice.records);

    m.jobs = 4;
    SweepResult parallel = sweep(m);
    CHECK(once.records == parallel.records);

    // a sweep over one cell is exactly that cell's run
    ExperimentMatrix single = quick_matrix();
    single.strategies = {default_strategy(StrategyKind::MasterSlaveAsync)};
    single.workloads = {quick('C')};
    single.configs = {{4, 4}};
    SweepResult one = sweep(single);
    REQUIRE(one.records.size() == 1);
    CHECK(one.records[0] == run_cell(single.strategies[0], single.workloads[0],
                                     single.configs[0], single));
}

TEST_CASE("repeats average without breaking determinism") {
    ExperimentMatrix m = quick_matrix();
    m.repeats = 2;
    MetricsRecord a = run_cell(default_strategy(StrategyKind::QuorumPeer),
                               quick('A'), {4, 4}, m);
    MetricsRecord b = run_cell(default_strategy(StrategyKind::QuorumPeer),
                               quick('A'), {4, 4}, m);
    CHECK(a == b);
}

TEST_CASE("impossible placements are collected, not fatal") {
    ExperimentMatrix m = quick_matrix();
    m.strategies = {default_strategy(StrategyKind::QuorumPeer)};
    m.workloads = {quick('C')};
    m.configs = {{1, 1}, {8, 0}};  // 2 nodes cannot host 3 replicas
    SweepResult res = sweep(m);
    REQUIRE(res.records.size() == 1);
    CHECK(res.records[0].config == "8_0");
    REQUIRE(res.failures.size() == 1);
    CHECK(res.failures[0].find("QuorumPeer/C/1_1: ") == 0);
}

TEST_CASE("CSV output carries the fixed column set") {
    ExperimentMatrix m = quick_matrix();
    SweepResult res = sweep(m);
    std::string csv = to_csv(res.records);
    CHECK(csv.find("strategy,workload,config,throughput,read_mean,read_p95,"
                   "write_mean,write_p95,error_pct,ops_total\n") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') ==
          static_cast<long>(res.records.size()) + 1);
    CHECK(csv.find("\nMasterSlaveAsync,C,8_0,") != std::string::npos);
    CHECK(csv.find("\nHashShardedMemory,A,1_7,") != std::string::npos);
}

TEST_CASE("JSON round-trips records exactly") {
    ExperimentMatrix m = quick_matrix();
    SweepResult res = sweep(m);
    nlohmann::ordered_json doc = records_to_json(res.records);
    std::vector<MetricsRecord> back =
        records_from_json(nlohmann::json::parse(doc.dump()));
    CHECK(back == res.records);

    CHECK_THROWS_AS(records_from_json(nlohmann::json::object()), ConfigError);
    nlohmann::json bad = {{"records", {{{"strategy", "X"}, {"workload", "AB"}}}}};
    CHECK_THROWS_AS(records_from_json(bad), ConfigError);
}

TEST_CASE("reports land as csv, json, and per-pair plot data") {
    ExperimentMatrix m = quick_matrix();
    SweepResult res = sweep(m);
    fs::path dir = fs::temp_directory_path() / "burstsim_bench_report_test";
    fs::remove_all(dir);
    emit_report(res.records, dir);

    CHECK(slurp(dir / "results.csv") == to_csv(res.records));
    auto doc = nlohmann::json::parse(slurp(dir / "results.json"));
    CHECK(records_from_json(doc) == res.records);

    int dat_files = 0;
    for (const auto& entry : fs::directory_iterator(dir / "plots")) {
        CHECK(entry.path().extension() == ".dat");
        ++dat_files;
    }
    CHECK(dat_files == 4);  // strategies x workloads

    std::string dat = slurp(dir / "plots" / "MasterSlaveAsync_C.dat");
    CHECK(dat.find("# config throughput read_mean write_mean error_pct\n") == 0);
    CHECK(std::count(dat.begin(), dat.end(), '\n') == 4);  // header + 3 configs
    CHECK(dat.find("\n8_0 ") != std::string::npos);
    CHECK(dat.find("\n1_7 ") != std::string::npos);

    CHECK_THROWS_AS(emit_report({}, dir), ConfigError);
    fs::remove_all(dir);
}
