#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "burstsim/errors.hpp"
#include "burstsim/experiment.hpp"

using namespace burstsim;
using nlohmann::json;

TEST_CASE("a bare seed expands to the full default matrix") {
    ExperimentMatrix m = experiment_from_json(json{{"seed", 1}});
    CHECK(m.seed == 1);
    CHECK(m.strategies.size() == 6);
    CHECK(m.workloads.size() == 6);
    CHECK(m.configs.size() == 8);
    CHECK(m.configs.front().label() == "8_0");
    CHECK(m.configs.back().label() == "1_7");
    CHECK(m.timeout_ms == 1500.0);
    CHECK(m.client_threads == 8);
    CHECK(m.repeats == 1);
    CHECK(m.jobs == 1);
    CHECK(m.profile.spike_probability == 0.0);
    CHECK(m.profile.seed == 1);  // profile inherits the experiment seed
}

TEST_CASE("the seed is the one mandatory field") {
    CHECK_THROWS_AS(experiment_from_json(json::object()), ConfigError);
    CHECK_THROWS_AS(experiment_from_json(json::array()), ConfigError);
}

TEST_CASE("unknown keys are config errors, not silent noise") {
    CHECK_THROWS_AS(experiment_from_json(json{{"seed", 1}, {"sede", 2}}),
                    ConfigError);
    CHECK_THROWS_AS(
        experiment_from_json(json{{"seed", 1},
                                  {"profile", {{"cross_latency", 5}}}}),
        ConfigError);
    CHECK_THROWS_AS(
        experiment_from_json(
            json{{"seed", 1},
                 {"strategies", {{{"kind", "QuorumPeer"}, {"acks", 1}}}}}),
        ConfigError);
}

TEST_CASE("strategies accept names and parameterized objects") {
    json doc{{"seed", 1},
             {"strategies",
              {"QuorumPeer",
               {{"kind", "PeerEventual"}, {"replica_count", 5}, {"read_acks", 1}},
               {{"kind", "MasterSlaveAsync"}, {"replica_count", "full"}}}}};
    ExperimentMatrix m = experiment_from_json(doc);
    REQUIRE(m.strategies.size() == 3);
    CHECK(m.strategies[0].kind == StrategyKind::QuorumPeer);
    CHECK(m.strategies[0].replica_count == 3);
    CHECK(m.strategies[1].replica_count == 5);
    CHECK(m.strategies[1].read_acks == 1);
    CHECK(m.strategies[1].write_acks == 2);  // untouched default
    CHECK(m.strategies[2].replica_count == 0);

    CHECK_THROWS_AS(
        experiment_from_json(json{{"seed", 1}, {"strategies", {"Paxos"}}}),
        ConfigError);
    CHECK_THROWS_AS(
        experiment_from_json(
            json{{"seed", 1}, {"strategies", {{{"replica_count", 3}}}}}),
        ConfigError);
    CHECK_THROWS_AS(
        experiment_from_json(
            json{{"seed", 1}, {"strategies", {"QuorumPeer", "QuorumPeer"}}}),
        ConfigError);
    CHECK_THROWS_AS(
        experiment_from_json(json{{"seed", 1}, {"strategies", json::array()}}),
        ConfigError);
}

TEST_CASE("workload selection and shared size overrides") {
    json doc{{"seed", 1},
             {"workloads", {"A", "C"}},
             {"workload", {{"load_count", 100}, {"run_count", 50}}}};
    ExperimentMatrix m = experiment_from_json(doc);
    REQUIRE(m.workloads.size() == 2);
    CHECK(m.workloads[0].label == 'A');
    CHECK(m.workloads[1].label == 'C');
    for (const auto& w : m.workloads) {
        CHECK(w.load_count == 100);
        CHECK(w.run_count == 50);
        CHECK(w.scan_max == 100);  // untouched
    }
    CHECK_THROWS_AS(
        experiment_from_json(json{{"seed", 1}, {"workloads", {"AB"}}}),
        ConfigError);
    CHECK_THROWS_AS(experiment_from_json(json{{"seed", 1}, {"workloads", {"G"}}}),
                    ConfigError);
}

TEST_CASE("cluster splits come from a list or the full enumeration") {
    ExperimentMatrix all =
        experiment_from_json(json{{"seed", 1}, {"configs", "all"}});
    CHECK(all.configs.size() == 8);

    ExperimentMatrix four =
        experiment_from_json(json{{"seed", 1}, {"total_nodes", 4}});
    REQUIRE(four.configs.size() == 4);
    CHECK(four.configs.front().label() == "4_0");
    CHECK(four.configs.back().label() == "1_3");

    ExperimentMatrix picked = experiment_from_json(
        json{{"seed", 1}, {"configs", {{8, 0}, {2, 6}}}});
    REQUIRE(picked.configs.size() == 2);
    CHECK(picked.configs[1].label() == "2_6");

    CHECK_THROWS_AS(
        experiment_from_json(json{{"seed", 1}, {"configs", {{8, 0, 1}}}}),
        ConfigError);
    CHECK_THROWS_AS(experiment_from_json(json{{"seed", 1}, {"configs", 5}}),
                    ConfigError);
    CHECK_THROWS_AS(
        experiment_from_json(json{{"seed", 1}, {"configs", {{0, 0}}}}),
        ConfigError);
}

TEST_CASE("profile overrides feed the network model") {
    json doc{{"seed", 3},
             {"profile",
              {{"cross_ms", {100.0, 101.0}},
               {"spike_probability", 0.25},
               {"seed", 99}}}};
    ExperimentMatrix m = experiment_from_json(doc);
    CHECK(m.profile.cross_ms.lo == 100.0);
    CHECK(m.profile.cross_ms.hi == 101.0);
    CHECK(m.profile.spike_probability == 0.25);
    CHECK(m.profile.seed == 3);  // experiment seed wins over the profile's

    CHECK_THROWS_AS(
        profile_from_json(json{{"cross_ms", {0.1, 0.2}}}),  // below intra bands
        ConfigError);
    CHECK_THROWS_AS(profile_from_json(json{{"cross_ms", {100.0}}}), ConfigError);
    CHECK_THROWS_AS(profile_from_json(json(5)), ConfigError);
}

TEST_CASE("dotted overrides edit the document in place") {
    json doc{{"seed", 1}};
    apply_override(doc, "seed=5");
    CHECK(doc["seed"] == 5);

    apply_override(doc, "profile.spike_probability=0.25");
    CHECK(doc["profile"]["spike_probability"] == 0.25);

    apply_override(doc, "profile.cross_ms=[50,60]");
    CHECK(doc["profile"]["cross_ms"] == json({50, 60}));

    apply_override(doc, "configs=all");  // bare word becomes a string
    CHECK(doc["configs"] == "all");

    apply_override(doc, "workloads=[\"A\",\"B\"]");
    ExperimentMatrix m = experiment_from_json(doc);
    CHECK(m.seed == 5);
    CHECK(m.profile.spike_probability == 0.25);
    CHECK(m.workloads.size() == 2);

    CHECK_THROWS_AS(apply_override(doc, "novalue"), ConfigError);
    CHECK_THROWS_AS(apply_override(doc, "=5"), ConfigError);
    CHECK_THROWS_AS(apply_override(doc, "a..b=1"), ConfigError);
}

TEST_CASE("experiment files load through the same schema") {
    std::string path = "/tmp/burstsim_experiment_test.json";
    {
        std::ofstream out(path);
        out << R"({"seed": 11, "workloads": ["C"], "configs": [[8, 0]]})";
    }
    ExperimentMatrix m = load_experiment(path);
    CHECK(m.seed == 11);
    CHECK(m.workloads.size() == 1);
    CHECK(m.configs.size() == 1);

    {
        std::ofstream out(path);
        out << "{not json";
    }
    CHECK_THROWS_AS(load_experiment(path), ConfigError);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_experiment(path), ConfigError);
}
