#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "burstsim/bench.hpp"
#include "burstsim/errors.hpp"
#include "burstsim/experiment.hpp"
#include "burstsim/netsim.hpp"
#include "burstsim/provision.hpp"
#include "burstsim/topology.hpp"
#include "burstsim/wireguard.hpp"

namespace fs = std::filesystem;
using namespace burstsim;

namespace {

void write_file(const fs::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << body;
}

/// Small config shared by provision and netprobe: {"seed": u64, "profile": {...}}.
struct SiteConfig {
    bool has_seed = false;
    std::uint64_t seed = 0;
    NetworkProfile profile;
};

SiteConfig load_site_config(const std::string& path) {
    SiteConfig sc;
    if (path.empty()) return sc;
    nlohmann::json doc = read_json_file(path);
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (key != "seed" && key != "profile")
            throw ConfigError("unknown key \"" + key + "\" in " + path);
    }
    if (doc.contains("seed")) {
        sc.seed = doc["seed"].get<std::uint64_t>();
        sc.has_seed = true;
    }
    if (doc.contains("profile")) sc.profile = profile_from_json(doc["profile"]);
    return sc;
}

std::uint64_t require_seed(const SiteConfig& sc, bool flag_set,
                           std::uint64_t flag_seed) {
    if (flag_set) return flag_seed;
    if (sc.has_seed) return sc.seed;
    throw ConfigError("a seed is required (config \"seed\" or --seed)");
}

NodeSpec probe_endpoint(const std::string& name, int id) {
    if (name == "shared-private") return {id, Cloud::Private, NodeRole::DataNode};
    if (name == "shared-public") return {id, Cloud::Public, NodeRole::DataNode};
    if (name == "broker-private") return {id, Cloud::Private, NodeRole::BrokerVm};
    if (name == "broker-public") return {id, Cloud::Public, NodeRole::BrokerVm};
    throw ConfigError("unknown endpoint \"" + name +
                      "\" (use broker-private, broker-public, shared-private, "
                      "or shared-public)");
}

ClusterConfig cluster_from_label(const std::string& label) {
    auto us = label.find('_');
    if (us == std::string::npos || us == 0 || us + 1 >= label.size())
        throw ConfigError("cluster label must look like n_m, e.g. 6_2");
    try {
        ClusterConfig c{std::stoi(label.substr(0, us)),
                        std::stoi(label.substr(us + 1))};
        if (c.n_local < 0 || c.m_remote < 0 || c.total() < 1)
            throw ConfigError("cluster needs at least one node: " + label);
        return c;
    } catch (const std::invalid_argument&) {
        throw ConfigError("cluster label must be numeric: " + label);
    } catch (const std::out_of_range&) {
        throw ConfigError("cluster label out of range: " + label);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid-cloud bursting simulator: provisioning state machine, "
                 "calibrated network probes, database benchmark sweeps"};
    app.require_subcommand(1);

    // provision run
    auto* provision = app.add_subcommand("provision", "deployment state machine");
    provision->require_subcommand(1);
    auto* prov_run =
        provision->add_subcommand("run", "run phases 1-6, write tunnel configs");
    std::string prov_config, prov_out;
    std::uint64_t prov_seed = 0;
    prov_run->add_option("--config", prov_config, "site config JSON");
    prov_run->add_option("--out", prov_out, "output directory")->required();
    auto* prov_seed_opt = prov_run->add_option("--seed", prov_seed, "seed override");
    prov_run->callback([&]() {
        SiteConfig sc = load_site_config(prov_config);
        std::uint64_t seed = require_seed(sc, prov_seed_opt->count() > 0, prov_seed);
        Topology topology;
        MockProvider provider;
        DeploymentState state = provision_all(topology, sc.profile, provider, seed);
        fs::create_directories(prov_out);
        write_file(fs::path(prov_out) / "donor-wg0.conf",
                   render_wg_config(*state.donor_wg));
        write_file(fs::path(prov_out) / "consumer-wg0.conf",
                   render_wg_config(*state.consumer_wg));
        write_file(fs::path(prov_out) / "routes.json", routes_to_json(state));
        write_file(fs::path(prov_out) / "state.json", state_to_json(state));
        for (const auto& line : state.log) std::cerr << line << "\n";
        std::cerr << "wrote donor-wg0.conf consumer-wg0.conf routes.json "
                     "state.json to "
                  << prov_out << "\n";
    });

    // netprobe ping
    auto* netprobe = app.add_subcommand("netprobe", "latency/bandwidth probes");
    netprobe->require_subcommand(1);
    auto* ping = netprobe->add_subcommand("ping", "round-trip latency probe");
    std::string ping_from, ping_to, ping_config;
    int ping_packets = 1000;
    std::uint64_t ping_seed = 0;
    ping->add_option("--from", ping_from, "source network")->required();
    ping->add_option("--to", ping_to, "destination network")->required();
    ping->add_option("--packets", ping_packets, "packet count");
    ping->add_option("--config", ping_config, "site config JSON");
    auto* ping_seed_opt = ping->add_option("--seed", ping_seed, "seed override");
    ping->callback([&]() {
        SiteConfig sc = load_site_config(ping_config);
        std::uint64_t seed = require_seed(sc, ping_seed_opt->count() > 0, ping_seed);
        ProbeStats stats = ping_probe(probe_endpoint(ping_from, 0),
                                      probe_endpoint(ping_to, 1), ping_packets,
                                      sc.profile, seed);
        std::cout << to_json_line(stats) << "\n";
    });

    // netprobe iperf
    auto* iperf = netprobe->add_subcommand("iperf", "sustained-transfer probe");
    std::string iperf_direction = "down", iperf_config;
    double iperf_duration = 1.0;
    iperf->add_option("--direction", iperf_direction, "up|down|intra")
        ->check(CLI::IsMember({"up", "down", "intra"}));
    iperf->add_option("--duration", iperf_duration, "seconds")
        ->check(CLI::PositiveNumber);
    iperf->add_option("--config", iperf_config, "site config JSON");
    iperf->callback([&]() {
        SiteConfig sc = load_site_config(iperf_config);
        Direction dir = iperf_direction == "up"     ? Direction::Up
                        : iperf_direction == "down" ? Direction::Down
                                                    : Direction::Intra;
        double kbps = iperf_probe(dir, iperf_duration, sc.profile);
        char line[160];
        std::snprintf(line, sizeof(line),
                      "{\"direction\":\"%s\",\"duration_s\":%.3f,"
                      "\"kbytes_per_sec\":%.4f}",
                      iperf_direction.c_str(), iperf_duration, kbps);
        std::cout << line << "\n";
    });

    // bench run / bench sweep
    auto* bench = app.add_subcommand("bench", "closed-loop benchmark");
    bench->require_subcommand(1);

    auto* bench_run = bench->add_subcommand("run", "run a single cell");
    std::string br_config, br_out, br_strategy, br_workload = "A",
                br_cluster = "8_0";
    std::vector<std::string> br_sets;
    std::uint64_t br_seed = 0;
    bench_run->add_option("--config", br_config, "experiment JSON");
    bench_run->add_option("--out", br_out, "also write report files here");
    bench_run->add_option("--strategy", br_strategy, "strategy kind")->required();
    bench_run->add_option("--workload", br_workload, "workload label A-F");
    bench_run->add_option("--cluster", br_cluster, "cluster config n_m");
    bench_run->add_option("--set", br_sets, "dotted-path config override");
    auto* br_seed_opt = bench_run->add_option("--seed", br_seed, "seed override");
    bench_run->callback([&]() {
        nlohmann::json doc = br_config.empty() ? nlohmann::json::object()
                                               : read_json_file(br_config);
        if (br_seed_opt->count() > 0) doc["seed"] = br_seed;
        for (const auto& s : br_sets) apply_override(doc, s);
        ExperimentMatrix matrix = experiment_from_json(doc);

        ReplicationStrategy strategy =
            default_strategy(strategy_kind_from_string(br_strategy));
        for (const auto& s : matrix.strategies)
            if (to_string(s.kind) == br_strategy) strategy = s;
        if (br_workload.size() != 1)
            throw ConfigError("workload label must be one letter");
        WorkloadSpec workload = make_workload(br_workload[0]);
        for (const auto& w : matrix.workloads)
            if (w.label == br_workload[0]) workload = w;
        ClusterConfig config = cluster_from_label(br_cluster);

        MetricsRecord rec = run_cell(strategy, workload, config, matrix);
        std::cout << records_to_json({rec})["records"][0].dump() << "\n";
        if (!br_out.empty()) emit_report({rec}, br_out);
    });

    auto* bench_sweep = bench->add_subcommand("sweep", "run the full matrix");
    std::string bs_config, bs_out;
    std::vector<std::string> bs_sets;
    std::uint64_t bs_seed = 0;
    int bs_repeats = 0, bs_jobs = 0;
    bench_sweep->add_option("--config", bs_config, "experiment JSON")->required();
    bench_sweep->add_option("--out", bs_out, "output directory")->required();
    bench_sweep->add_option("--set", bs_sets, "dotted-path config override");
    auto* bs_seed_opt = bench_sweep->add_option("--seed", bs_seed, "seed override");
    auto* bs_repeats_opt =
        bench_sweep->add_option("--repeats", bs_repeats, "runs per cell");
    auto* bs_jobs_opt = bench_sweep->add_option("--jobs", bs_jobs, "worker threads");
    bench_sweep->callback([&]() {
        nlohmann::json doc = read_json_file(bs_config);
        if (bs_seed_opt->count() > 0) doc["seed"] = bs_seed;
        if (bs_repeats_opt->count() > 0) doc["repeats"] = bs_repeats;
        if (bs_jobs_opt->count() > 0) doc["jobs"] = bs_jobs;
        for (const auto& s : bs_sets) apply_override(doc, s);
        ExperimentMatrix matrix = experiment_from_json(doc);

        SweepResult result = sweep(matrix);
        for (const auto& f : result.failures)
            std::cerr << "cell failed: " << f << "\n";
        if (!result.records.empty()) {
            emit_report(result.records, bs_out);
            std::cerr << "wrote " << result.records.size() << " records to "
                      << bs_out << "\n";
        }
        if (!result.failures.empty())
            throw Error(std::to_string(result.failures.size()) +
                        " of " +
                        std::to_string(result.records.size() +
                                       result.failures.size()) +
                        " cells failed");
    });

    // report emit
    auto* report = app.add_subcommand("report", "re-emit result files");
    report->require_subcommand(1);
    auto* emit = report->add_subcommand(
        "emit", "regenerate csv/json/plot files from results.json");
    std::string re_in, re_out;
    emit->add_option("--in", re_in, "results.json path")->required();
    emit->add_option("--out", re_out, "output directory")->required();
    emit->callback([&]() {
        std::vector<MetricsRecord> records =
            records_from_json(read_json_file(re_in));
        emit_report(records, re_out);
        std::cerr << "wrote " << records.size() << " records to " << re_out
                  << "\n";
    });

    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
