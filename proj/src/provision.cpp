#include "burstsim/provision.hpp"

#include <algorithm>
#include <cstdio>
#include <utility>

#include <nlohmann/json.hpp>

#include "burstsim/errors.hpp"
#include "burstsim/rng.hpp"

namespace burstsim {

namespace {

std::string host_in(const std::string& cidr, int host) {
    auto dot = cidr.rfind('.');
    return cidr.substr(0, dot + 1) + std::to_string(host);
}

}  // namespace

NetworkRecord MockProvider::create_network(Cloud cloud, const std::string& name,
                                           const std::string& cidr) {
    NetworkRecord rec{"net-" + name, cloud, name, cidr};
    networks_.push_back(rec);
    return rec;
}

VmRecord MockProvider::create_vm(Cloud cloud, const std::string& name,
                                 const std::string& network_id,
                                 bool want_public_ip) {
    auto net = std::find_if(networks_.begin(), networks_.end(),
                            [&](const NetworkRecord& n) { return n.id == network_id; });
    if (net == networks_.end())
        throw ProvisionError(0, "unknown network " + network_id);
    int on_net = static_cast<int>(std::count_if(
        vms_.begin(), vms_.end(),
        [&](const VmRecord& v) { return v.network_id == network_id; }));
    VmRecord rec{"vm-" + name, cloud, name, network_id,
                 host_in(net->cidr, 10 + on_net), std::nullopt};
    if (want_public_ip) rec.public_ip = "203.0.113." + std::to_string(next_public_ip_++);
    vms_.push_back(rec);
    return rec;
}

bool DeploymentState::has_artifacts(int phase) const {
    switch (phase) {
        case 1: return consumer_broker_net && consumer_broker_vm;
        case 2: return donor_broker_net && donor_broker_vm;
        case 3:
            return donor_wg && consumer_wg && tunnel_active &&
                   key_store.count("donor") && key_store.count("consumer");
        case 4: return consumer_shared_net && donor_shared_net;
        case 5: return peerings.size() == 2;
        case 6: return route_tables.size() == 4;
        default: return false;
    }
}

void authorize_peer(DeploymentState& state, const std::string& consumer_public_key,
                    const std::string& consumer_vpn_ip) {
    if (!state.donor_wg)
        throw SequencingError("peer authorization requires the donor interface");
    auto& peers = state.donor_wg->peers;
    bool known = std::any_of(peers.begin(), peers.end(), [&](const WgPeerEntry& p) {
        return p.public_key == consumer_public_key;
    });
    if (!known) {
        WgPeerEntry entry;
        entry.public_key = consumer_public_key;
        entry.allowed_ips = {consumer_vpn_ip + "/32"};
        peers.push_back(entry);
        state.log.push_back("tunnel: consumer peer authorized on donor");
    }
    state.consumer_authorized = true;
}

void activate_consumer_tunnel(DeploymentState& state) {
    if (!state.consumer_wg)
        throw SequencingError("tunnel activation requires the consumer interface");
    if (!state.consumer_authorized)
        throw SequencingError("tunnel activation before peer authorization");
    state.tunnel_active = true;
    state.log.push_back("tunnel: consumer interface up");
}

namespace {

void do_phase(DeploymentState& next, int phase, Provider& provider,
              const Topology& topology, const VpnPlan& plan, std::uint64_t seed) {
    switch (phase) {
        case 1: {
            next.consumer_broker_net = provider.create_network(
                Cloud::Private, "broker-private", plan.broker_private_cidr);
            next.consumer_broker_vm = provider.create_vm(
                Cloud::Private, "broker-consumer", next.consumer_broker_net->id, false);
            next.log.push_back("created " + next.consumer_broker_net->id + " (" +
                               plan.broker_private_cidr + ") in " +
                               topology.private_dc.name);
            next.log.push_back("created " + next.consumer_broker_vm->id + " at " +
                               next.consumer_broker_vm->private_ip);
            break;
        }
        case 2: {
            next.donor_broker_net = provider.create_network(
                Cloud::Public, "broker-public", plan.broker_public_cidr);
            next.donor_broker_vm = provider.create_vm(
                Cloud::Public, "broker-donor", next.donor_broker_net->id, true);
            next.log.push_back("created " + next.donor_broker_net->id + " (" +
                               plan.broker_public_cidr + ") in " +
                               topology.public_dc.name);
            next.log.push_back("created " + next.donor_broker_vm->id + " at " +
                               next.donor_broker_vm->private_ip + " / " +
                               *next.donor_broker_vm->public_ip);
            break;
        }
        case 3: {
            RngStream donor_rng = RngStream::derive(seed, "provision/keys/donor");
            RngStream consumer_rng = RngStream::derive(seed, "provision/keys/consumer");
            KeyPair donor = generate_keypair(donor_rng);
            KeyPair consumer = generate_keypair(consumer_rng);
            next.key_store["donor"] = donor;
            next.key_store["consumer"] = consumer;

            WgInterfaceConfig dcfg;
            dcfg.interface_address = plan.donor_vpn_ip + "/24";
            dcfg.listen_port = plan.listen_port;
            dcfg.private_key = donor.private_b64();
            next.donor_wg = dcfg;
            next.log.push_back("tunnel: donor interface configured");

            next.log.push_back("tunnel: consumer keypair generated");
            authorize_peer(next, consumer.public_b64(), plan.consumer_vpn_ip);

            WgInterfaceConfig ccfg;
            ccfg.interface_address = plan.consumer_vpn_ip + "/24";
            ccfg.listen_port = plan.listen_port;
            ccfg.private_key = consumer.private_b64();
            WgPeerEntry donor_peer;
            donor_peer.public_key = donor.public_b64();
            donor_peer.allowed_ips = {plan.donor_vpn_ip + "/32"};
            donor_peer.endpoint = *next.donor_broker_vm->public_ip + ":" +
                                  std::to_string(plan.listen_port);
            ccfg.peers.push_back(donor_peer);
            next.consumer_wg = ccfg;
            next.log.push_back("tunnel: consumer interface configured");

            activate_consumer_tunnel(next);
            break;
        }
        case 4: {
            next.consumer_shared_net = provider.create_network(
                Cloud::Private, "shared-private", plan.shared_private_cidr);
            next.donor_shared_net = provider.create_network(
                Cloud::Public, "shared-public", plan.shared_public_cidr);
            next.log.push_back("created " + next.consumer_shared_net->id + " (" +
                               plan.shared_private_cidr + ")");
            next.log.push_back("created " + next.donor_shared_net->id + " (" +
                               plan.shared_public_cidr + ")");
            break;
        }
        case 5: {
            next.peerings.push_back({Cloud::Private, "interface-attachment",
                                     next.consumer_broker_net->id,
                                     next.consumer_shared_net->id});
            next.peerings.push_back({Cloud::Public, "vnet-peering",
                                     next.donor_broker_net->id,
                                     next.donor_shared_net->id});
            next.log.push_back("attached " + next.consumer_broker_vm->id + " to " +
                               next.consumer_shared_net->id);
            next.log.push_back("peered " + next.donor_broker_net->id + " with " +
                               next.donor_shared_net->id);
            break;
        }
        case 6: {
            next.route_tables.push_back(
                {Cloud::Private, "shared",
                 {{plan.shared_public_cidr, next.consumer_broker_vm->id}}});
            next.route_tables.push_back(
                {Cloud::Public, "shared",
                 {{plan.shared_private_cidr, next.donor_broker_vm->id}}});
            next.route_tables.push_back(
                {Cloud::Private, "broker", {{plan.shared_public_cidr, "wg0"}}});
            next.route_tables.push_back(
                {Cloud::Public, "broker", {{plan.shared_private_cidr, "wg0"}}});
            next.log.push_back("installed 4 route tables");
            break;
        }
    }
}

}  // namespace

void run_phase(DeploymentState& state, int phase, Provider& provider,
               const Topology& topology, const VpnPlan& plan,
               std::uint64_t seed) {
    if (phase < 1 || phase > 6)
        throw ConfigError("phase index " + std::to_string(phase) + " out of range");
    if (state.current_phase != phase - 1)
        throw SequencingError("phase " + std::to_string(phase) +
                              " requested while deployment is at phase " +
                              std::to_string(state.current_phase));
    DeploymentState next = state;
    try {
        do_phase(next, phase, provider, topology, plan, seed);
    } catch (const SequencingError&) {
        throw;
    } catch (const std::exception& e) {
        state.log.push_back("phase " + std::to_string(phase) +
                            " failed: " + e.what());
        throw ProvisionError(phase, e.what());
    }
    next.current_phase = phase;
    next.log.push_back("phase " + std::to_string(phase) + " complete");
    state = std::move(next);
}

bool shared_networks_reachable(const DeploymentState& state, Cloud from) {
    Cloud to = from == Cloud::Private ? Cloud::Public : Cloud::Private;
    const std::string dst_cidr = to == Cloud::Public ? "192.168.40.0/24"
                                                     : "192.168.30.0/24";
    auto table = [&](Cloud c, const std::string& net) -> const RouteTable* {
        for (const auto& t : state.route_tables)
            if (t.cloud == c && t.network == net) return &t;
        return nullptr;
    };
    auto rule_for = [&](const RouteTable* t) -> const RouteRule* {
        if (!t) return nullptr;
        for (const auto& r : t->rules)
            if (r.destination == dst_cidr) return &r;
        return nullptr;
    };

    // hop 1: shared router forwards to its own broker vm
    const RouteRule* shared_rule = rule_for(table(from, "shared"));
    const auto& own_broker = from == Cloud::Private ? state.consumer_broker_vm
                                                    : state.donor_broker_vm;
    if (!shared_rule || !own_broker || shared_rule->next_hop != own_broker->id)
        return false;

    // hop 2: broker forwards into the tunnel
    const RouteRule* broker_rule = rule_for(table(from, "broker"));
    if (!broker_rule || broker_rule->next_hop != "wg0") return false;
    if (!state.tunnel_active || !state.consumer_authorized) return false;

    // hops 3-4: far broker is attached to its shared network via peering
    const auto& far_broker_net = to == Cloud::Private ? state.consumer_broker_net
                                                      : state.donor_broker_net;
    const auto& far_shared_net = to == Cloud::Private ? state.consumer_shared_net
                                                      : state.donor_shared_net;
    if (!far_broker_net || !far_shared_net) return false;
    return std::any_of(state.peerings.begin(), state.peerings.end(),
                       [&](const PeeringRecord& p) {
                           return p.cloud == to &&
                                  p.broker_network_id == far_broker_net->id &&
                                  p.shared_network_id == far_shared_net->id;
                       });
}

DeploymentState provision_all(const Topology& topology,
                              const NetworkProfile& profile, Provider& provider,
                              std::uint64_t seed, const VpnPlan& plan) {
    profile.validate();
    DeploymentState state;
    char rtt[96];
    std::snprintf(rtt, sizeof(rtt), "tunnel: expected rtt within [%.1f, %.1f] ms",
                  profile.cross_ms.lo, profile.cross_ms.hi);
    state.log.push_back(rtt);
    for (int phase = 1; phase <= 6; ++phase)
        run_phase(state, phase, provider, topology, plan, seed);
    if (!shared_networks_reachable(state, Cloud::Private) ||
        !shared_networks_reachable(state, Cloud::Public))
        throw ProvisionError(6, "shared networks unreachable after deployment");
    state.log.push_back("reachability verified in both directions");
    return state;
}

namespace {

nlohmann::ordered_json net_json(const NetworkRecord& n) {
    return {{"id", n.id},
            {"cloud", to_string(n.cloud)},
            {"name", n.name},
            {"cidr", n.cidr}};
}

nlohmann::ordered_json vm_json(const VmRecord& v) {
    nlohmann::ordered_json j{{"id", v.id},
                             {"cloud", to_string(v.cloud)},
                             {"name", v.name},
                             {"network_id", v.network_id},
                             {"private_ip", v.private_ip}};
    if (v.public_ip) j["public_ip"] = *v.public_ip;
    return j;
}

}  // namespace

std::string state_to_json(const DeploymentState& state) {
    nlohmann::ordered_json j;
    j["current_phase"] = state.current_phase;
    j["consumer_authorized"] = state.consumer_authorized;
    j["tunnel_active"] = state.tunnel_active;
    j["networks"] = nlohmann::ordered_json::array();
    for (const auto& n : {state.consumer_broker_net, state.donor_broker_net,
                          state.consumer_shared_net, state.donor_shared_net})
        if (n) j["networks"].push_back(net_json(*n));
    j["vms"] = nlohmann::ordered_json::array();
    for (const auto& v : {state.consumer_broker_vm, state.donor_broker_vm})
        if (v) j["vms"].push_back(vm_json(*v));
    j["public_keys"] = nlohmann::ordered_json::object();
    for (const auto& [owner, pair] : state.key_store)
        j["public_keys"][owner] = pair.public_b64();
    j["log"] = state.log;
    return j.dump(2) + "\n";
}

std::string routes_to_json(const DeploymentState& state) {
    nlohmann::ordered_json j;
    j["tables"] = nlohmann::ordered_json::array();
    for (const auto& t : state.route_tables) {
        nlohmann::ordered_json rules = nlohmann::ordered_json::array();
        for (const auto& r : t.rules)
            rules.push_back({{"destination", r.destination},
                             {"next_hop", r.next_hop}});
        j["tables"].push_back({{"cloud", to_string(t.cloud)},
                               {"network", t.network},
                               {"rules", rules}});
    }
    return j.dump(2) + "\n";
}

}  // namespace burstsim
