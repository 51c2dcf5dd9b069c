#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "burstsim/dbmodel.hpp"
#include "burstsim/netsim.hpp"
#include "burstsim/topology.hpp"
#include "burstsim/workload.hpp"

namespace burstsim {

/// Full experiment: strategies x workloads x cluster configs under one
/// network profile. seed keys every per-cell rng stream.
struct ExperimentMatrix {
    std::vector<ReplicationStrategy> strategies;
    std::vector<WorkloadSpec> workloads;
    std::vector<ClusterConfig> configs;
    NetworkProfile profile;
    std::uint64_t seed = 0;
    double timeout_ms = 1500.0;
    int client_threads = 8;
    int repeats = 1;
    int jobs = 1;

    void validate() const;  // non-empty axes, no duplicate cells, sane knobs
};

/// Aggregated run-phase metrics of one cell. Latency stats cover only Ok
/// outcomes of the matching kind (reads: Read/Scan; writes: Update/Insert/
/// ReadModifyWrite) and are 0 when that set is empty.
struct MetricsRecord {
    std::string strategy;
    char workload = 'A';
    std::string config;
    double throughput = 0.0;
    double read_mean = 0.0;
    double read_p95 = 0.0;
    double write_mean = 0.0;
    double write_p95 = 0.0;
    double error_pct = 0.0;
    long ops_total = 0;

    bool operator==(const MetricsRecord&) const = default;
};

std::string cell_id(const ReplicationStrategy& strategy,
                    const WorkloadSpec& workload, const ClusterConfig& config);

/// Runs one cell on a fresh cluster and keyspace. Deterministic for
/// (matrix.seed, cell id); execution order across cells cannot matter
/// because all streams are derived, not shared.
MetricsRecord run_cell(const ReplicationStrategy& strategy,
                       const WorkloadSpec& workload, const ClusterConfig& config,
                       const ExperimentMatrix& matrix);

struct SweepResult {
    std::vector<MetricsRecord> records;
    std::vector<std::string> failures;  // "<cell id>: <error>"
};

/// Every cell in axis order; failed cells are collected, not fatal.
/// jobs > 1 fans cells out over that many threads.
SweepResult sweep(const ExperimentMatrix& matrix);

std::string to_csv(const std::vector<MetricsRecord>& records);
nlohmann::ordered_json records_to_json(const std::vector<MetricsRecord>& records);
std::vector<MetricsRecord> records_from_json(const nlohmann::json& doc);

/// Writes results.csv, results.json, and plots/<strategy>_<workload>.dat
/// under out_dir.
void emit_report(const std::vector<MetricsRecord>& records,
                 const std::filesystem::path& out_dir);

}  // namespace burstsim
