#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "burstsim/dbmodel.hpp"
#include "burstsim/rng.hpp"

namespace burstsim {

enum class KeyDistribution { Zipfian, Latest, Uniform };

struct RecordSchema {
    int field_count = 10;
    int field_length_bytes = 8;
    int record_bytes() const { return field_count * field_length_bytes; }
};

/// One benchmark workload: operation mix, key distribution, phase sizes.
/// The mix is ordered; the categorical draw walks it in declaration order.
struct WorkloadSpec {
    char label = 'A';
    std::string display_name;
    std::vector<std::pair<OpKind, double>> mix;
    KeyDistribution key_distribution = KeyDistribution::Zipfian;
    int load_count = 10000;
    int run_count = 1000;
    int scan_max = 100;

    void validate() const;  // throws ConfigError
};

/// Standard mixes A..F. D uses the Latest distribution; everything else is
/// Zipfian. Throws ConfigError for unknown labels.
WorkloadSpec make_workload(char label);
std::vector<WorkloadSpec> all_workloads();

/// Bounded Zipfian over ranks 0..items-1 (rank 0 most popular), exponent
/// theta. The item count can grow; the zeta sum is extended incrementally.
class ZipfianGenerator {
public:
    explicit ZipfianGenerator(long items, double theta = 0.99);
    long next(RngStream& rng);
    void grow(long items);
    long items() const { return items_; }

private:
    void refresh();
    long items_;
    double theta_;
    double zeta2_;
    double zetan_;
    double alpha_ = 0.0;
    double eta_ = 0.0;
};

/// Key selection over the inserted keyspace 0..keys-1. Latest mirrors the
/// Zipfian ranks onto the newest keys.
class KeyChooser {
public:
    KeyChooser(KeyDistribution dist, long initial_keys);
    std::uint64_t next_existing(RngStream& rng);  // throws on empty keyspace
    std::uint64_t mint();                         // new key, grows keyspace
    long keys() const { return keys_; }

private:
    KeyDistribution dist_;
    long keys_;
    ZipfianGenerator zipf_;
};

struct PhaseResult {
    std::vector<OpOutcome> load;
    std::vector<OpOutcome> run;
    double load_wall_ms = 0.0;
    double run_wall_ms = 0.0;
};

using OpExecutor = std::function<OpOutcome(OpKind, std::uint64_t)>;

/// flush/load/run with closed-loop virtual clients on one simulated clock.
/// A timed-out op occupies its client for timeout_ms, not the full model
/// latency. Generator draws happen in global issue order and never depend
/// on op latencies, so the op sequence is identical across profiles that
/// share a seed.
PhaseResult run_phases(const WorkloadSpec& spec, const OpExecutor& execute,
                       int client_threads, double timeout_ms,
                       RngStream& wl_rng);

}  // namespace burstsim
