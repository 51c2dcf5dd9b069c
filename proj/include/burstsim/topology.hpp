#pragma once

#include <string>
#include <vector>

namespace burstsim {

enum class Cloud { Private, Public };

const char* to_string(Cloud c);

enum class NodeRole { DataNode, BrokerVm, ManagerVm };

const char* to_string(NodeRole r);

struct Datacenter {
    Cloud id;
    std::string name;
};

/// One VM in the cluster. Data nodes get ordinal ids 0..total-1; the two
/// helper nodes that exist outside the data-node inventory (the benchmark
/// client and the manager/SQL node, both Private) use negative sentinels.
struct NodeSpec {
    int node_id;
    Cloud datacenter;
    NodeRole role;

    bool operator==(const NodeSpec&) const = default;
};

/// Benchmark client VM; lives in the Private cloud.
NodeSpec client_node();

/// Cluster-manager / SQL server VM; always Private.
NodeSpec manager_node();

/// Split of data nodes between the two datacenters: n_local in Private,
/// m_remote in Public. (total, 0) is the non-bursting setup, (1, total-1)
/// full-bursting.
struct ClusterConfig {
    int n_local;
    int m_remote;

    int total() const { return n_local + m_remote; }
    std::string label() const;  // "n_m"

    bool operator==(const ClusterConfig&) const = default;
};

/// Both datacenters plus the data-node split swept by experiments.
struct Topology {
    Datacenter private_dc{Cloud::Private, "openstack-local"};
    Datacenter public_dc{Cloud::Public, "azure-east-us"};
    ClusterConfig config{8, 0};
};

/// All splits of `total` data nodes, from (total,0) down to (1,total-1).
/// Throws TopologyError for total < 2.
std::vector<ClusterConfig> enumerate_configs(int total);

/// Data-node inventory for a config: Private nodes first, ids ascending.
/// Pure function of the config.
std::vector<NodeSpec> build_nodes(const ClusterConfig& config);

}  // namespace burstsim
