#include <doctest.h>

#include <nlohmann/json.hpp>

#include "burstsim/errors.hpp"
#include "burstsim/provision.hpp"

using namespace burstsim;

namespace {

/// Provider that fails on demand, for transactionality tests.
class FlakyProvider : public MockProvider {
public:
    std::string fail_on_vm;

    VmRecord create_vm(Cloud cloud, const std::string& name,
                       const std::string& network_id, bool want_public_ip) override {
        if (name == fail_on_vm) throw Error("simulated backend outage");
        return MockProvider::create_vm(cloud, name, network_id, want_public_ip);
    }
};

DeploymentState deploy(std::uint64_t seed = 42) {
    MockProvider provider;
    return provision_all(Topology{}, NetworkProfile{}, provider, seed);
}

bool log_contains(const DeploymentState& s, const std::string& needle) {
    for (const auto& line : s.log)
        if (line.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("mock provider hands out deterministic addresses") {
    MockProvider p;
    NetworkRecord net = p.create_network(Cloud::Private, "broker-private",
                                         "192.168.10.0/24");
    CHECK(net.id == "net-broker-private");
    CHECK(net.cidr == "192.168.10.0/24");

    VmRecord a = p.create_vm(Cloud::Private, "one", net.id, false);
    VmRecord b = p.create_vm(Cloud::Private, "two", net.id, true);
    CHECK(a.private_ip == "192.168.10.10");
    CHECK(b.private_ip == "192.168.10.11");
    CHECK(!a.public_ip);
    CHECK(b.public_ip == "203.0.113.10");

    CHECK_THROWS_AS(p.create_vm(Cloud::Private, "x", "net-missing", false),
                    ProvisionError);
}

TEST_CASE("full deployment reaches phase 6 with both directions routable") {
    DeploymentState s = deploy();
    CHECK(s.current_phase == 6);
    CHECK(s.peerings.size() == 2);
    CHECK(s.route_tables.size() == 4);
    CHECK(s.tunnel_active);
    CHECK(s.consumer_authorized);
    CHECK(shared_networks_reachable(s, Cloud::Private));
    CHECK(shared_networks_reachable(s, Cloud::Public));
    CHECK(log_contains(s, "reachability verified in both directions"));
    for (int phase = 1; phase <= 6; ++phase) CHECK(s.has_artifacts(phase));
}

TEST_CASE("tunnel configs cross-reference each other's keys") {
    DeploymentState s = deploy();
    REQUIRE(s.donor_wg);
    REQUIRE(s.consumer_wg);
    REQUIRE(s.donor_wg->peers.size() == 1);
    REQUIRE(s.consumer_wg->peers.size() == 1);

    CHECK(s.donor_wg->peers[0].public_key == s.key_store.at("consumer").public_b64());
    CHECK(s.consumer_wg->peers[0].public_key == s.key_store.at("donor").public_b64());
    CHECK(s.donor_wg->peers[0].allowed_ips ==
          std::vector<std::string>{"10.8.0.2/32"});
    CHECK(!s.donor_wg->peers[0].endpoint);  // donor only listens
    CHECK(s.consumer_wg->peers[0].endpoint ==
          *s.donor_broker_vm->public_ip + ":51820");
    CHECK(s.donor_wg->interface_address == "10.8.0.1/24");
    CHECK(s.consumer_wg->interface_address == "10.8.0.2/24");
}

TEST_CASE("phases only run in order") {
    MockProvider provider;
    DeploymentState s;
    Topology topo;
    VpnPlan plan;
    CHECK_FALSE(s.has_artifacts(1));
    CHECK_THROWS_AS(run_phase(s, 2, provider, topo, plan, 1), SequencingError);
    CHECK_THROWS_AS(run_phase(s, 0, provider, topo, plan, 1), ConfigError);
    CHECK_THROWS_AS(run_phase(s, 7, provider, topo, plan, 1), ConfigError);
    run_phase(s, 1, provider, topo, plan, 1);
    CHECK(s.current_phase == 1);
    CHECK_THROWS_AS(run_phase(s, 1, provider, topo, plan, 1), SequencingError);
    CHECK_THROWS_AS(run_phase(s, 3, provider, topo, plan, 1), SequencingError);
}

TEST_CASE("a backend failure leaves the state untouched") {
    FlakyProvider provider;
    provider.fail_on_vm = "broker-donor";
    DeploymentState s;
    Topology topo;
    VpnPlan plan;
    run_phase(s, 1, provider, topo, plan, 1);
    std::size_t log_before = s.log.size();

    CHECK_THROWS_AS(run_phase(s, 2, provider, topo, plan, 1), ProvisionError);
    try {
        run_phase(s, 2, provider, topo, plan, 1);
    } catch (const ProvisionError& e) {
        CHECK(e.phase == 2);
    }
    CHECK(s.current_phase == 1);
    CHECK(!s.donor_broker_net);  // the half-made network never lands in state
    CHECK(!s.donor_broker_vm);
    CHECK(s.log.size() > log_before);
    CHECK(log_contains(s, "phase 2 failed"));

    // same state resumes cleanly once the backend recovers
    provider.fail_on_vm.clear();
    run_phase(s, 2, provider, topo, plan, 1);
    CHECK(s.current_phase == 2);
    CHECK(s.has_artifacts(2));
}

TEST_CASE("peer authorization is idempotent and order-checked") {
    DeploymentState s = deploy();
    std::string key = s.key_store.at("consumer").public_b64();
    std::size_t peers_before = s.donor_wg->peers.size();
    authorize_peer(s, key, "10.8.0.2");
    CHECK(s.donor_wg->peers.size() == peers_before);

    DeploymentState fresh;
    CHECK_THROWS_AS(authorize_peer(fresh, "k", "10.8.0.2"), SequencingError);
    CHECK_THROWS_AS(activate_consumer_tunnel(fresh), SequencingError);
    fresh.consumer_wg = WgInterfaceConfig{};
    CHECK_THROWS_AS(activate_consumer_tunnel(fresh), SequencingError);
    CHECK(!fresh.tunnel_active);
}

TEST_CASE("deployment is deterministic in the seed") {
    DeploymentState a = deploy(7);
    DeploymentState b = deploy(7);
    DeploymentState c = deploy(8);
    CHECK(state_to_json(a) == state_to_json(b));
    CHECK(routes_to_json(a) == routes_to_json(b));
    CHECK(a.key_store.at("donor").public_b64() !=
          c.key_store.at("donor").public_b64());
}

TEST_CASE("state and route reports are well formed JSON") {
    DeploymentState s = deploy();
    nlohmann::json state = nlohmann::json::parse(state_to_json(s));
    CHECK(state["current_phase"] == 6);
    CHECK(state["tunnel_active"] == true);
    CHECK(state["networks"].size() == 4);
    CHECK(state["vms"].size() == 2);
    CHECK(state["public_keys"].size() == 2);
    // private key material never leaves the key store
    CHECK(state_to_json(s).find(s.key_store.at("donor").private_b64()) ==
          std::string::npos);

    nlohmann::json routes = nlohmann::json::parse(routes_to_json(s));
    REQUIRE(routes["tables"].size() == 4);
    int wg_hops = 0;
    for (const auto& t : routes["tables"])
        for (const auto& r : t["rules"])
            if (r["next_hop"] == "wg0") ++wg_hops;
    CHECK(wg_hops == 2);  // one broker table per cloud points into the tunnel
}
