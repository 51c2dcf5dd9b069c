#include "burstsim/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <future>
#include <optional>
#include <set>

#include "burstsim/errors.hpp"
#include "burstsim/stats.hpp"

namespace burstsim {

void ExperimentMatrix::validate() const {
    if (strategies.empty() || workloads.empty() || configs.empty())
        throw ConfigError("experiment axes must be non-empty");
    std::set<std::string> kinds;
    for (const auto& s : strategies)
        if (!kinds.insert(to_string(s.kind)).second)
            throw ConfigError("duplicate strategy kind: " + to_string(s.kind));
    std::set<char> labels;
    for (const auto& w : workloads) {
        w.validate();
        if (!labels.insert(w.label).second)
            throw ConfigError(std::string("duplicate workload label: ") + w.label);
    }
    std::set<std::string> cells;
    for (const auto& c : configs)
        if (!cells.insert(c.label()).second)
            throw ConfigError("duplicate cluster config: " + c.label());
    if (timeout_ms <= 0.0) throw ConfigError("timeout_ms must be positive");
    if (client_threads < 1) throw ConfigError("client_threads must be >= 1");
    if (repeats < 1) throw ConfigError("repeats must be >= 1");
    if (jobs < 1) throw ConfigError("jobs must be >= 1");
}

std::string cell_id(const ReplicationStrategy& strategy,
                    const WorkloadSpec& workload, const ClusterConfig& config) {
    return to_string(strategy.kind) + "/" + workload.label + "/" + config.label();
}

namespace {

struct RunTally {
    double throughput = 0.0;
    double read_mean = 0.0, read_p95 = 0.0;
    double write_mean = 0.0, write_p95 = 0.0;
    double error_pct = 0.0;
};

RunTally tally_run(const PhaseResult& phases, const WorkloadSpec& workload) {
    std::vector<double> reads, writes;
    long errors = 0;
    for (const OpOutcome& o : phases.run) {
        if (o.status == OpStatus::TimedOut) {
            ++errors;
            continue;
        }
        if (is_write_kind(o.kind))
            writes.push_back(o.latency_ms);
        else
            reads.push_back(o.latency_ms);
    }
    RunTally t;
    t.throughput = workload.run_count / (phases.run_wall_ms / 1000.0);
    t.read_mean = reads.empty() ? 0.0 : stats::mean(reads);
    t.read_p95 = reads.empty() ? 0.0 : stats::percentile(reads, 95.0);
    t.write_mean = writes.empty() ? 0.0 : stats::mean(writes);
    t.write_p95 = writes.empty() ? 0.0 : stats::percentile(writes, 95.0);
    t.error_pct = 100.0 * errors / workload.run_count;
    return t;
}

}  // namespace

MetricsRecord run_cell(const ReplicationStrategy& strategy,
                       const WorkloadSpec& workload, const ClusterConfig& config,
                       const ExperimentMatrix& matrix) {
    const std::string cell = cell_id(strategy, workload, config);
    try {
        DatabaseModel db(strategy, config);
        const NodeSpec client = client_node();

        RunTally sum;
        for (int rep = 0; rep < matrix.repeats; ++rep) {
            const std::string base = cell + "/rep" + std::to_string(rep);
            RngStream wl_rng = RngStream::derive(matrix.seed, base + "/wl");
            RngStream db_rng = RngStream::derive(matrix.seed, base + "/db");
            auto exec = [&](OpKind kind, std::uint64_t key) {
                return db.execute(kind, key, client, matrix.profile,
                                  matrix.timeout_ms, workload.scan_max, db_rng);
            };
            PhaseResult phases = run_phases(workload, exec, matrix.client_threads,
                                            matrix.timeout_ms, wl_rng);
            RunTally t = tally_run(phases, workload);
            sum.throughput += t.throughput;
            sum.read_mean += t.read_mean;
            sum.read_p95 += t.read_p95;
            sum.write_mean += t.write_mean;
            sum.write_p95 += t.write_p95;
            sum.error_pct += t.error_pct;
        }

        MetricsRecord rec;
        rec.strategy = to_string(strategy.kind);
        rec.workload = workload.label;
        rec.config = config.label();
        rec.throughput = sum.throughput / matrix.repeats;
        rec.read_mean = sum.read_mean / matrix.repeats;
        rec.read_p95 = sum.read_p95 / matrix.repeats;
        rec.write_mean = sum.write_mean / matrix.repeats;
        rec.write_p95 = sum.write_p95 / matrix.repeats;
        rec.error_pct = sum.error_pct / matrix.repeats;
        rec.ops_total = workload.run_count;
        return rec;
    } catch (const PlacementError& e) {
        throw PlacementError(cell + ": " + e.what());
    }
}

SweepResult sweep(const ExperimentMatrix& matrix) {
    matrix.validate();
    matrix.profile.validate();

    struct Cell {
        const ReplicationStrategy* strategy;
        const WorkloadSpec* workload;
        const ClusterConfig* config;
    };
    std::vector<Cell> cells;
    for (const auto& s : matrix.strategies)
        for (const auto& w : matrix.workloads)
            for (const auto& c : matrix.configs) cells.push_back({&s, &w, &c});

    std::vector<std::optional<MetricsRecord>> slots(cells.size());
    std::vector<std::string> errors(cells.size());

    auto run_range = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < cells.size(); i += stride) {
            const Cell& cell = cells[i];
            try {
                slots[i] = run_cell(*cell.strategy, *cell.workload, *cell.config,
                                    matrix);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };

    if (matrix.jobs <= 1) {
        run_range(0, 1);
    } else {
        std::vector<std::future<void>> tasks;
        for (int j = 0; j < matrix.jobs; ++j)
            tasks.push_back(std::async(std::launch::async, run_range,
                                       static_cast<std::size_t>(j),
                                       static_cast<std::size_t>(matrix.jobs)));
        for (auto& t : tasks) t.get();
    }

    SweepResult result;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (slots[i])
            result.records.push_back(std::move(*slots[i]));
        else
            result.failures.push_back(
                cell_id(*cells[i].strategy, *cells[i].workload, *cells[i].config) +
                ": " + errors[i]);
    }
    return result;
}

std::string to_csv(const std::vector<MetricsRecord>& records) {
    std::string out =
        "strategy,workload,config,throughput,read_mean,read_p95,"
        "write_mean,write_p95,error_pct,ops_total\n";
    char line[320];
    for (const auto& r : records) {
        std::snprintf(line, sizeof(line),
                      "%s,%c,%s,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%ld\n",
                      r.strategy.c_str(), r.workload, r.config.c_str(),
                      r.throughput, r.read_mean, r.read_p95, r.write_mean,
                      r.write_p95, r.error_pct, r.ops_total);
        out += line;
    }
    return out;
}

nlohmann::ordered_json records_to_json(const std::vector<MetricsRecord>& records) {
    nlohmann::ordered_json doc;
    doc["records"] = nlohmann::ordered_json::array();
    for (const auto& r : records)
        doc["records"].push_back({{"strategy", r.strategy},
                                  {"workload", std::string(1, r.workload)},
                                  {"config", r.config},
                                  {"throughput", r.throughput},
                                  {"read_mean", r.read_mean},
                                  {"read_p95", r.read_p95},
                                  {"write_mean", r.write_mean},
                                  {"write_p95", r.write_p95},
                                  {"error_pct", r.error_pct},
                                  {"ops_total", r.ops_total}});
    return doc;
}

std::vector<MetricsRecord> records_from_json(const nlohmann::json& doc) {
    if (!doc.contains("records") || !doc["records"].is_array())
        throw ConfigError("results document lacks a records array");
    std::vector<MetricsRecord> out;
    for (const auto& j : doc["records"]) {
        MetricsRecord r;
        r.strategy = j.at("strategy").get<std::string>();
        std::string wl = j.at("workload").get<std::string>();
        if (wl.size() != 1) throw ConfigError("workload label must be one char");
        r.workload = wl[0];
        r.config = j.at("config").get<std::string>();
        r.throughput = j.at("throughput").get<double>();
        r.read_mean = j.at("read_mean").get<double>();
        r.read_p95 = j.at("read_p95").get<double>();
        r.write_mean = j.at("write_mean").get<double>();
        r.write_p95 = j.at("write_p95").get<double>();
        r.error_pct = j.at("error_pct").get<double>();
        r.ops_total = j.at("ops_total").get<long>();
        out.push_back(std::move(r));
    }
    return out;
}

void emit_report(const std::vector<MetricsRecord>& records,
                 const std::filesystem::path& out_dir) {
    if (records.empty()) throw ConfigError("no records to report");
    std::filesystem::create_directories(out_dir / "plots");

    auto write_file = [](const std::filesystem::path& path,
                         const std::string& body) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write " + path.string());
        out << body;
    };

    write_file(out_dir / "results.csv", to_csv(records));
    write_file(out_dir / "results.json", records_to_json(records).dump(2) + "\n");

    // one plot file per (strategy, workload), rows in record order
    std::vector<std::pair<std::string, std::string>> groups;  // key -> body
    auto body_of = [&](const std::string& key) -> std::string& {
        for (auto& [k, body] : groups)
            if (k == key) return body;
        groups.emplace_back(key,
                            "# config throughput read_mean write_mean error_pct\n");
        return groups.back().second;
    };
    char line[256];
    for (const auto& r : records) {
        std::snprintf(line, sizeof(line), "%s %.6f %.6f %.6f %.6f\n",
                      r.config.c_str(), r.throughput, r.read_mean, r.write_mean,
                      r.error_pct);
        body_of(r.strategy + "_" + r.workload) += line;
    }
    for (const auto& [key, body] : groups)
        write_file(out_dir / "plots" / (key + ".dat"), body);
}

}  // namespace burstsim
