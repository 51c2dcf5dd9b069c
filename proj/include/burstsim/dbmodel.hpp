#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "burstsim/netsim.hpp"
#include "burstsim/rng.hpp"
#include "burstsim/topology.hpp"

namespace burstsim {

/// Replication/consistency families. Each maps a database operation to a
/// message pattern over the network model; real systems differ in far more
/// ways, but the pattern is what couples latency to cluster placement.
enum class StrategyKind {
    MasterSlaveAsync,    // single master, async fan-out, read-any
    QuorumPeer,          // coordinator + k-of-N acks on read and write
    PeerEventual,        // peer coordinator, tunable ack count
    LocalQuorumSharded,  // fixed shard count, quorum within shard replicas
    HashShardedMemory,   // slot-owner only, in-memory service time
    SyncTwoPhase,        // node-group pairs, two-phase commit writes
};

std::string to_string(StrategyKind kind);
StrategyKind strategy_kind_from_string(const std::string& name);

/// replica_count 0 means "all nodes" and is resolved at placement time.
struct ReplicationStrategy {
    StrategyKind kind = StrategyKind::QuorumPeer;
    int replica_count = 3;
    int write_acks = 2;
    int read_acks = 2;
    int shard_count = 0;  // 0 = one shard range per node (or per group)
    double service_time_ms = 1.0;

    int effective_replicas(int total_nodes) const {
        return replica_count == 0 ? total_nodes : replica_count;
    }
    void validate(int total_nodes) const;  // throws PlacementError / ConfigError
};

/// Factory with the per-family default parameters.
ReplicationStrategy default_strategy(StrategyKind kind);
std::vector<ReplicationStrategy> default_strategies();

enum class OpKind { Read, Update, Insert, Scan, ReadModifyWrite };

std::string to_string(OpKind kind);
bool is_write_kind(OpKind kind);

enum class OpStatus { Ok, TimedOut };

struct OpOutcome {
    OpKind kind = OpKind::Read;
    double latency_ms = 0.0;
    OpStatus status = OpStatus::Ok;
    long bytes_moved = 0;
};

/// One contiguous slice of the 64-bit hash space and the nodes holding it.
/// replicas[0] is the primary where the strategy designates one.
struct ShardRange {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;  // inclusive
    std::vector<int> replicas;
};

/// Equal-width partition of the hash space; lookup uses the multiply-high
/// trick, which lands exactly on the stored range boundaries.
struct ShardMap {
    std::vector<ShardRange> ranges;

    const ShardRange& range_for(std::uint64_t hash) const;
    std::size_t index_for(std::uint64_t hash) const;
};

/// Deterministic placement for (strategy, config); no rng involved.
ShardMap place_replicas(const ReplicationStrategy& strategy,
                        const ClusterConfig& config);

/// k-th smallest of the ack latency vector, 1-based k. This is the moment a
/// quorum of k replies has arrived.
double quorum_ack_latency(std::vector<double> latencies, int k);

/// Node-group pairing used by SyncTwoPhase: same-datacenter pairs first,
/// one cross-cloud pair when both sides are odd, a singleton for odd totals.
std::vector<std::vector<int>> pair_node_groups(const ClusterConfig& config);

/// Fixed per-record size: 10 fields of 8 bytes.
inline constexpr long kRecordBytes = 80;

/// A placed cluster that executes operations against a network profile.
class DatabaseModel {
public:
    DatabaseModel(ReplicationStrategy strategy, ClusterConfig config);

    /// Composes the strategy's message pattern for one operation. Pure given
    /// the rng stream; rng draw order depends only on (strategy, key, kind),
    /// never on previous latencies, so per-op draws align across profiles.
    OpOutcome execute(OpKind kind, std::uint64_t key, const NodeSpec& client,
                      const NetworkProfile& profile, double timeout_ms,
                      int scan_max, RngStream& rng) const;

    const ShardMap& shards() const { return shards_; }
    const ReplicationStrategy& strategy() const { return strategy_; }
    const std::vector<NodeSpec>& nodes() const { return nodes_; }

private:
    ReplicationStrategy strategy_;
    ClusterConfig config_;
    std::vector<NodeSpec> nodes_;
    std::vector<int> all_ids_;
    ShardMap shards_;
};

}  // namespace burstsim
