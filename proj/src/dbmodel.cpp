#include "burstsim/dbmodel.hpp"

#include <algorithm>
#include <numeric>

#include "burstsim/errors.hpp"

namespace burstsim {

std::string to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::MasterSlaveAsync: return "MasterSlaveAsync";
        case StrategyKind::QuorumPeer: return "QuorumPeer";
        case StrategyKind::PeerEventual: return "PeerEventual";
        case StrategyKind::LocalQuorumSharded: return "LocalQuorumSharded";
        case StrategyKind::HashShardedMemory: return "HashShardedMemory";
        case StrategyKind::SyncTwoPhase: return "SyncTwoPhase";
    }
    return "?";
}

StrategyKind strategy_kind_from_string(const std::string& name) {
    for (StrategyKind k :
         {StrategyKind::MasterSlaveAsync, StrategyKind::QuorumPeer,
          StrategyKind::PeerEventual, StrategyKind::LocalQuorumSharded,
          StrategyKind::HashShardedMemory, StrategyKind::SyncTwoPhase})
        if (to_string(k) == name) return k;
    throw ConfigError("unknown strategy kind: " + name);
}

std::string to_string(OpKind kind) {
    switch (kind) {
        case OpKind::Read: return "read";
        case OpKind::Update: return "update";
        case OpKind::Insert: return "insert";
        case OpKind::Scan: return "scan";
        case OpKind::ReadModifyWrite: return "rmw";
    }
    return "?";
}

bool is_write_kind(OpKind kind) {
    return kind == OpKind::Update || kind == OpKind::Insert ||
           kind == OpKind::ReadModifyWrite;
}

void ReplicationStrategy::validate(int total_nodes) const {
    int n = effective_replicas(total_nodes);
    if (n < 1 || n > total_nodes)
        throw PlacementError("replica count " + std::to_string(n) +
                             " does not fit " + std::to_string(total_nodes) +
                             " nodes");
    if (read_acks < 1 || read_acks > n)
        throw ConfigError("read_acks out of [1, N]");
    if (write_acks < 1 || write_acks > n)
        throw ConfigError("write_acks out of [1, N]");
    if (service_time_ms < 0.0) throw ConfigError("service_time_ms negative");
    if (shard_count < 0) throw ConfigError("shard_count negative");
    if (kind == StrategyKind::SyncTwoPhase && replica_count != 2)
        throw ConfigError("SyncTwoPhase groups are pairs; replica_count must be 2");
    if (kind == StrategyKind::LocalQuorumSharded && shard_count != 0 &&
        shard_count != 8)
        throw ConfigError("LocalQuorumSharded uses a fixed 8-way shard split");
}

ReplicationStrategy default_strategy(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::MasterSlaveAsync:
            return {kind, 0, 1, 1, 0, 1.0};
        case StrategyKind::QuorumPeer:
            return {kind, 3, 2, 2, 0, 1.0};
        case StrategyKind::PeerEventual:
            return {kind, 3, 2, 2, 0, 1.0};
        case StrategyKind::LocalQuorumSharded:
            return {kind, 3, 2, 2, 8, 1.0};
        case StrategyKind::HashShardedMemory:
            return {kind, 0, 1, 1, 0, 0.1};
        case StrategyKind::SyncTwoPhase:
            return {kind, 2, 2, 1, 0, 1.0};
    }
    throw ConfigError("unknown strategy kind");
}

std::vector<ReplicationStrategy> default_strategies() {
    return {default_strategy(StrategyKind::MasterSlaveAsync),
            default_strategy(StrategyKind::QuorumPeer),
            default_strategy(StrategyKind::PeerEventual),
            default_strategy(StrategyKind::LocalQuorumSharded),
            default_strategy(StrategyKind::HashShardedMemory),
            default_strategy(StrategyKind::SyncTwoPhase)};
}

std::size_t ShardMap::index_for(std::uint64_t hash) const {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(hash) * ranges.size()) >> 64);
}

const ShardRange& ShardMap::range_for(std::uint64_t hash) const {
    if (ranges.empty()) throw PlacementError("empty shard map");
    return ranges[index_for(hash)];
}

std::vector<std::vector<int>> pair_node_groups(const ClusterConfig& config) {
    std::vector<std::vector<int>> groups;
    for (int i = 0; i + 1 < config.n_local; i += 2)
        groups.push_back({i, i + 1});
    for (int i = config.n_local; i + 1 < config.total(); i += 2)
        groups.push_back({i, i + 1});
    bool odd_local = config.n_local % 2 != 0;
    bool odd_remote = config.m_remote % 2 != 0;
    if (odd_local && odd_remote)
        groups.push_back({config.n_local - 1, config.total() - 1});
    else if (odd_local)
        groups.push_back({config.n_local - 1});
    else if (odd_remote)
        groups.push_back({config.total() - 1});
    std::sort(groups.begin(), groups.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return groups;
}

ShardMap place_replicas(const ReplicationStrategy& strategy,
                        const ClusterConfig& config) {
    const int total = config.total();
    strategy.validate(total);
    const int n = strategy.effective_replicas(total);

    std::vector<std::vector<int>> lists;
    auto consecutive = [&](int count) {
        for (int i = 0; i < count; ++i) {
            std::vector<int> walk(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j) walk[static_cast<std::size_t>(j)] = (i + j) % total;
            lists.push_back(std::move(walk));
        }
    };

    switch (strategy.kind) {
        case StrategyKind::MasterSlaveAsync: {
            std::vector<int> all(static_cast<std::size_t>(total));
            std::iota(all.begin(), all.end(), 0);  // master = lowest id, Private-first
            lists.push_back(std::move(all));
            break;
        }
        case StrategyKind::QuorumPeer:
        case StrategyKind::PeerEventual:
        case StrategyKind::HashShardedMemory:
            consecutive(strategy.shard_count > 0 ? strategy.shard_count : total);
            break;
        case StrategyKind::LocalQuorumSharded:
            consecutive(strategy.shard_count > 0 ? strategy.shard_count : 8);
            break;
        case StrategyKind::SyncTwoPhase:
            lists = pair_node_groups(config);
            break;
    }

    ShardMap map;
    const auto r = static_cast<unsigned __int128>(lists.size());
    for (std::size_t i = 0; i < lists.size(); ++i) {
        ShardRange range;
        range.lo = static_cast<std::uint64_t>(
            ((static_cast<unsigned __int128>(i) << 64) + (r - 1)) / r);
        range.hi = i + 1 < lists.size()
                       ? static_cast<std::uint64_t>(
                             ((static_cast<unsigned __int128>(i + 1) << 64) + (r - 1)) / r) - 1
                       : ~0ULL;
        range.replicas = std::move(lists[i]);
        map.ranges.push_back(std::move(range));
    }
    return map;
}

double quorum_ack_latency(std::vector<double> latencies, int k) {
    if (k < 1 || k > static_cast<int>(latencies.size()))
        throw ConfigError("ack count outside the replica set");
    auto kth = latencies.begin() + (k - 1);
    std::nth_element(latencies.begin(), kth, latencies.end());
    return *kth;
}

namespace {

double midpoint_rtt(const NodeSpec& a, const NodeSpec& b,
                    const NetworkProfile& profile) {
    if (a.node_id == b.node_id) return 0.0;
    if (a.datacenter == b.datacenter)
        return (a.datacenter == Cloud::Private ? profile.intra_private_ms
                                               : profile.intra_public_ms)
            .midpoint();
    return profile.cross_ms.midpoint();
}

}  // namespace

DatabaseModel::DatabaseModel(ReplicationStrategy strategy, ClusterConfig config)
    : strategy_(strategy), config_(config), nodes_(build_nodes(config)),
      all_ids_(static_cast<std::size_t>(config.total())),
      shards_(place_replicas(strategy, config)) {
    std::iota(all_ids_.begin(), all_ids_.end(), 0);
}

OpOutcome DatabaseModel::execute(OpKind kind, std::uint64_t key,
                                 const NodeSpec& client,
                                 const NetworkProfile& profile,
                                 double timeout_ms, int scan_max,
                                 RngStream& rng) const {
    const ShardRange& range = shards_.range_for(mix64(key));
    const double service = strategy_.service_time_ms;
    Cloud served_from = Cloud::Private;

    auto spec_of = [&](int id) -> const NodeSpec& {
        return nodes_[static_cast<std::size_t>(id)];
    };
    // expected-midpoint nearest; ties resolve to the earliest list entry
    auto nearest_from = [&](const NodeSpec& origin,
                            const std::vector<int>& ids) -> const NodeSpec& {
        const NodeSpec* best = &spec_of(ids.front());
        double best_d = midpoint_rtt(origin, *best, profile);
        for (std::size_t i = 1; i < ids.size(); ++i) {
            const NodeSpec& cand = spec_of(ids[i]);
            double d = midpoint_rtt(origin, cand, profile);
            if (d < best_d) {
                best_d = d;
                best = &cand;
            }
        }
        return *best;
    };
    auto quorum_leg = [&](const NodeSpec& coord, const std::vector<int>& ids,
                          int k) {
        std::vector<double> acks;
        acks.reserve(ids.size());
        for (int id : ids)
            acks.push_back(sample_latency(coord, spec_of(id), profile, rng));
        return quorum_ack_latency(std::move(acks), k);
    };

    auto read_leg = [&]() -> double {
        switch (strategy_.kind) {
            case StrategyKind::MasterSlaveAsync: {
                const NodeSpec& replica = nearest_from(client, range.replicas);
                served_from = replica.datacenter;
                return sample_latency(client, replica, profile, rng) + service;
            }
            case StrategyKind::QuorumPeer:
            case StrategyKind::PeerEventual:
            case StrategyKind::LocalQuorumSharded: {
                const NodeSpec& coord = nearest_from(client, range.replicas);
                served_from = coord.datacenter;
                double hop = sample_latency(client, coord, profile, rng);
                return hop + quorum_leg(coord, range.replicas, strategy_.read_acks) +
                       service;
            }
            case StrategyKind::HashShardedMemory: {
                const NodeSpec& owner = spec_of(range.replicas.front());
                served_from = owner.datacenter;
                return sample_latency(client, owner, profile, rng) + service;
            }
            case StrategyKind::SyncTwoPhase: {
                // reads go through the SQL node, which uses its nearest data
                // node; group membership only matters for commits
                NodeSpec server = manager_node();
                const NodeSpec& data = nearest_from(server, all_ids_);
                served_from = data.datacenter;
                return sample_latency(client, server, profile, rng) +
                       sample_latency(server, data, profile, rng) + service;
            }
        }
        throw ConfigError("unknown strategy kind");
    };

    auto write_leg = [&]() -> double {
        switch (strategy_.kind) {
            case StrategyKind::MasterSlaveAsync: {
                // async fan-out to slaves is off the latency path
                const NodeSpec& master = spec_of(range.replicas.front());
                return sample_latency(client, master, profile, rng) + service;
            }
            case StrategyKind::QuorumPeer:
            case StrategyKind::PeerEventual:
            case StrategyKind::LocalQuorumSharded: {
                const NodeSpec& coord = nearest_from(client, range.replicas);
                double hop = sample_latency(client, coord, profile, rng);
                return hop +
                       quorum_leg(coord, range.replicas, strategy_.write_acks) +
                       service;
            }
            case StrategyKind::HashShardedMemory: {
                const NodeSpec& owner = spec_of(range.replicas.front());
                return sample_latency(client, owner, profile, rng) + service;
            }
            case StrategyKind::SyncTwoPhase: {
                // prepare + commit rounds both wait on the slowest member
                NodeSpec server = manager_node();
                double hop = sample_latency(client, server, profile, rng);
                double worst = 0.0;
                for (int id : range.replicas)
                    worst = std::max(
                        worst, sample_latency(server, spec_of(id), profile, rng));
                return hop + 2.0 * worst + service;
            }
        }
        throw ConfigError("unknown strategy kind");
    };

    double latency = 0.0;
    long bytes = kRecordBytes;
    switch (kind) {
        case OpKind::Read:
            latency = read_leg();
            break;
        case OpKind::Update:
        case OpKind::Insert:
            latency = write_leg();
            break;
        case OpKind::Scan: {
            if (scan_max < 1) throw ConfigError("scan_max must be >= 1");
            long len = 1 + static_cast<long>(
                               rng.next_below(static_cast<std::uint64_t>(scan_max)));
            latency = read_leg();
            Direction dir = served_from == Cloud::Public ? Direction::Down
                                                         : Direction::Intra;
            bytes = len * kRecordBytes;
            latency += transfer_time_ms(bytes, dir, profile);
            break;
        }
        case OpKind::ReadModifyWrite:
            latency = read_leg() + write_leg();
            bytes = 2 * kRecordBytes;
            break;
    }

    OpOutcome out;
    out.kind = kind;
    out.latency_ms = latency;
    out.status = latency > timeout_ms ? OpStatus::TimedOut : OpStatus::Ok;
    out.bytes_moved = bytes;
    return out;
}

}  // namespace burstsim
