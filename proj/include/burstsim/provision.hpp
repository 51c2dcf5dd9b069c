#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "burstsim/netsim.hpp"
#include "burstsim/topology.hpp"
#include "burstsim/wireguard.hpp"

namespace burstsim {

struct NetworkRecord {
    std::string id;
    Cloud cloud;
    std::string name;   // "broker-private", "shared-public", ...
    std::string cidr;
};

struct VmRecord {
    std::string id;
    Cloud cloud;
    std::string name;
    std::string network_id;
    std::string private_ip;
    std::optional<std::string> public_ip;
};

/// Phase-5 link between a shared and a broker network. The two clouds use
/// different mechanisms (interface attachment vs. virtual network peering)
/// with identical reachability semantics.
struct PeeringRecord {
    Cloud cloud;
    std::string mechanism;  // "interface-attachment" | "vnet-peering"
    std::string broker_network_id;
    std::string shared_network_id;
};

struct RouteRule {
    std::string destination;  // CIDR
    std::string next_hop;     // vm id or interface name ("wg0")

    bool operator==(const RouteRule&) const = default;
};

/// Static routes of one router, keyed by (cloud, network kind).
struct RouteTable {
    Cloud cloud;
    std::string network;  // "broker" | "shared"
    std::vector<RouteRule> rules;
};

/// Infrastructure backend. The shipped implementation is an in-memory mock;
/// the interface is the seam for real cloud backends.
class Provider {
public:
    virtual ~Provider() = default;
    virtual NetworkRecord create_network(Cloud cloud, const std::string& name,
                                         const std::string& cidr) = 0;
    virtual VmRecord create_vm(Cloud cloud, const std::string& name,
                               const std::string& network_id,
                               bool want_public_ip) = 0;
};

/// Records every resource and hands out deterministic synthetic addresses.
/// Public IPs come from the 203.0.113.0/24 documentation range.
class MockProvider : public Provider {
public:
    NetworkRecord create_network(Cloud cloud, const std::string& name,
                                 const std::string& cidr) override;
    VmRecord create_vm(Cloud cloud, const std::string& name,
                       const std::string& network_id,
                       bool want_public_ip) override;

    const std::vector<NetworkRecord>& networks() const { return networks_; }
    const std::vector<VmRecord>& vms() const { return vms_; }

private:
    std::vector<NetworkRecord> networks_;
    std::vector<VmRecord> vms_;
    int next_public_ip_ = 10;
};

/// Everything the six deployment phases produce. Owned single-writer; the
/// key store plays the manager-VM role (it holds both ends' keys).
struct DeploymentState {
    int current_phase = 0;

    // phase 1-2
    std::optional<NetworkRecord> consumer_broker_net;
    std::optional<VmRecord> consumer_broker_vm;
    std::optional<NetworkRecord> donor_broker_net;
    std::optional<VmRecord> donor_broker_vm;

    // phase 3
    std::map<std::string, KeyPair> key_store;  // "donor" / "consumer"
    std::optional<WgInterfaceConfig> donor_wg;
    std::optional<WgInterfaceConfig> consumer_wg;
    bool consumer_authorized = false;
    bool tunnel_active = false;

    // phase 4-6
    std::optional<NetworkRecord> consumer_shared_net;
    std::optional<NetworkRecord> donor_shared_net;
    std::vector<PeeringRecord> peerings;
    std::vector<RouteTable> route_tables;

    std::vector<std::string> log;  // ordered events, no wall-clock stamps

    /// True iff every artifact of phase k is present.
    bool has_artifacts(int phase) const;
};

/// Addressing conventions baked into the deployment.
struct VpnPlan {
    std::string tunnel_cidr = "10.8.0.0/24";
    std::string donor_vpn_ip = "10.8.0.1";
    std::string consumer_vpn_ip = "10.8.0.2";
    int listen_port = 51820;
    std::string broker_private_cidr = "192.168.10.0/24";
    std::string broker_public_cidr = "192.168.20.0/24";
    std::string shared_private_cidr = "192.168.30.0/24";
    std::string shared_public_cidr = "192.168.40.0/24";
};

/// Runs one deployment phase (1..6). Requires current_phase == phase-1,
/// otherwise throws SequencingError. Provider failures leave the state's
/// phase and artifacts untouched (a failure event is logged) and surface as
/// ProvisionError carrying the phase index.
void run_phase(DeploymentState& state, int phase, Provider& provider,
               const Topology& topology, const VpnPlan& plan,
               std::uint64_t seed);

/// Adds the consumer's peer entry (AllowedIPs = consumer_vpn_ip/32, no
/// Endpoint) to the donor config. Idempotent. Throws SequencingError when
/// the donor config does not exist yet.
void authorize_peer(DeploymentState& state, const std::string& consumer_public_key,
                    const std::string& consumer_vpn_ip);

/// Brings the consumer's tunnel up; requires prior authorization.
void activate_consumer_tunnel(DeploymentState& state);

/// Phases 1..6 in order; verifies shared-to-shared reachability at the end.
/// Deterministic for (topology, plan, seed) against the mock provider.
DeploymentState provision_all(const Topology& topology,
                              const NetworkProfile& profile, Provider& provider,
                              std::uint64_t seed, const VpnPlan& plan = {});

/// Walks dst's shared CIDR from src's shared router and checks the exact
/// hop sequence shared-router -> broker -> tunnel -> broker -> shared-router.
bool shared_networks_reachable(const DeploymentState& state, Cloud from);

/// state.json / routes.json payloads.
std::string state_to_json(const DeploymentState& state);
std::string routes_to_json(const DeploymentState& state);

}  // namespace burstsim
