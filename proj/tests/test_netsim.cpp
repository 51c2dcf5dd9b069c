#include <doctest.h>

#include "burstsim/errors.hpp"
#include "burstsim/netsim.hpp"

using namespace burstsim;

namespace {

NodeSpec priv_node(int id) { return {id, Cloud::Private, NodeRole::DataNode}; }
NodeSpec pub_node(int id) { return {id, Cloud::Public, NodeRole::DataNode}; }

NetworkProfile degenerate() {
    NetworkProfile p;
    p.intra_private_ms = {0.6, 0.6};
    p.intra_public_ms = {1.25, 1.25};
    p.cross_ms = {229.5, 229.5};
    return p;
}

}  // namespace

TEST_CASE("profile validation rejects bad calibrations") {
    NetworkProfile p;
    CHECK_NOTHROW(p.validate());
    p.spike_probability = 1.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.intra_private_ms = {0.7, 0.5};
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.cross_ms = {0.1, 0.2};  // cross must sit above both intra bands
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.upload_kbps = -1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.spike_multiplier = 0.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("self messages cost nothing and burn no randomness") {
    NetworkProfile p;
    RngStream r(1);
    CHECK(sample_latency(priv_node(3), priv_node(3), p, r) == 0.0);
    RngStream fresh(1);
    CHECK(r.next_u64() == fresh.next_u64());
}

TEST_CASE("latency draws stay inside the configured interval") {
    NetworkProfile p;
    RngStream r(2);
    for (int i = 0; i < 2000; ++i) {
        CHECK(p.intra_private_ms.contains(
            sample_latency(priv_node(0), priv_node(1), p, r)));
        CHECK(p.intra_public_ms.contains(
            sample_latency(pub_node(5), pub_node(6), p, r)));
        CHECK(p.cross_ms.contains(sample_latency(priv_node(0), pub_node(5), p, r)));
    }
}

TEST_CASE("degenerate intervals give exact latencies") {
    NetworkProfile p = degenerate();
    RngStream r(3);
    CHECK(sample_latency(priv_node(0), priv_node(1), p, r) == 0.6);
    CHECK(sample_latency(pub_node(4), pub_node(5), p, r) == 1.25);
    CHECK(sample_latency(priv_node(0), pub_node(4), p, r) == 229.5);
}

TEST_CASE("certain spikes multiply the base draw") {
    NetworkProfile p = degenerate();
    p.spike_probability = 1.0;
    p.spike_multiplier = 5.0;
    RngStream r(4);
    CHECK(sample_latency(priv_node(0), priv_node(1), p, r) == 0.6 * 5.0);
}

TEST_CASE("spiked and unspiked streams align draw for draw") {
    NetworkProfile base;
    NetworkProfile spiky = base;
    spiky.spike_probability = 0.05;
    RngStream ra(77), rb(77);
    int spiked = 0;
    for (int i = 0; i < 5000; ++i) {
        double a = sample_latency(priv_node(0), pub_node(4), base, ra);
        double b = sample_latency(priv_node(0), pub_node(4), spiky, rb);
        if (b > a) {
            CHECK(b == a * spiky.spike_multiplier);
            ++spiked;
        } else {
            CHECK(a == b);
        }
    }
    CHECK(spiked > 150);  // ~250 expected
    CHECK(spiked < 400);
}

TEST_CASE("transfer time follows the KByte arithmetic") {
    NetworkProfile p;
    // 1009 KByte upstream at 1009 KByte/s is one second
    CHECK(transfer_time_ms(1009.0 * 1024.0, Direction::Up, p) ==
          doctest::Approx(1000.0).epsilon(1e-12));
    CHECK(transfer_time_ms(11191.0 * 1024.0, Direction::Down, p) ==
          doctest::Approx(1000.0).epsilon(1e-12));
    CHECK(transfer_time_ms(0, Direction::Up, p) == 0.0);
    double one = transfer_time_ms(4096, Direction::Intra, p);
    CHECK(transfer_time_ms(8192, Direction::Intra, p) == 2.0 * one);
}

TEST_CASE("ping probe reports calibrated statistics") {
    NetworkProfile p;
    ProbeStats cross = ping_probe(priv_node(0), pub_node(1), 1000, p, 1);
    CHECK(cross.packets_sent == 1000);
    CHECK(p.cross_ms.contains(cross.mean_ms));
    CHECK(cross.min_ms >= p.cross_ms.lo);
    CHECK(cross.max_ms <= p.cross_ms.hi);
    CHECK(cross.stddev_ms > 0.0);
    CHECK(cross.stddev_ms < p.cross_ms.width());

    ProbeStats again = ping_probe(priv_node(0), pub_node(1), 1000, p, 1);
    CHECK(again.mean_ms == cross.mean_ms);
    CHECK_THROWS_AS(ping_probe(priv_node(0), pub_node(1), 0, p, 1), ConfigError);
}

TEST_CASE("iperf probe converges on the configured bandwidth") {
    NetworkProfile p;
    CHECK(iperf_probe(Direction::Down, 600.0, p) ==
          doctest::Approx(11191.0).epsilon(0.001));
    CHECK(iperf_probe(Direction::Up, 600.0, p) ==
          doctest::Approx(1009.0).epsilon(0.001));
    CHECK(iperf_probe(Direction::Up, 1.0, p) ==
          doctest::Approx(1009.0).epsilon(0.01));
}

TEST_CASE("probe stats render as one JSON line") {
    ProbeStats s{1000, 229.5247, 228.5002, 230.4988, 0.5738};
    std::string line = to_json_line(s);
    CHECK(line ==
          "{\"packets_sent\":1000,\"mean_ms\":229.5247,\"min_ms\":228.5002,"
          "\"max_ms\":230.4988,\"stddev_ms\":0.5738}");
}
