#include "burstsim/topology.hpp"

#include "burstsim/errors.hpp"

namespace burstsim {

const char* to_string(Cloud c) {
    return c == Cloud::Private ? "private" : "public";
}

const char* to_string(NodeRole r) {
    switch (r) {
        case NodeRole::DataNode: return "data";
        case NodeRole::BrokerVm: return "broker";
        case NodeRole::ManagerVm: return "manager";
    }
    return "?";
}

NodeSpec client_node() {
    return NodeSpec{-1, Cloud::Private, NodeRole::ManagerVm};
}

NodeSpec manager_node() {
    return NodeSpec{-2, Cloud::Private, NodeRole::ManagerVm};
}

std::string ClusterConfig::label() const {
    return std::to_string(n_local) + "_" + std::to_string(m_remote);
}

std::vector<ClusterConfig> enumerate_configs(int total) {
    if (total < 2)
        throw TopologyError("cluster sweep needs at least 2 nodes, got " +
                            std::to_string(total));
    std::vector<ClusterConfig> configs;
    configs.reserve(static_cast<std::size_t>(total));
    // (total,0) first: every config keeps at least one Private node
    for (int m = 0; m < total; ++m) configs.push_back({total - m, m});
    return configs;
}

std::vector<NodeSpec> build_nodes(const ClusterConfig& config) {
    std::vector<NodeSpec> nodes;
    nodes.reserve(static_cast<std::size_t>(config.total()));
    for (int id = 0; id < config.total(); ++id) {
        Cloud dc = id < config.n_local ? Cloud::Private : Cloud::Public;
        nodes.push_back({id, dc, NodeRole::DataNode});
    }
    return nodes;
}

}  // namespace burstsim
