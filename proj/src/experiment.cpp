#include "burstsim/experiment.hpp"

#include <fstream>
#include <set>

#include "burstsim/errors.hpp"

namespace burstsim {

namespace {

void reject_unknown_keys(const nlohmann::json& j,
                         const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key))
            throw ConfigError("unknown key \"" + key + "\" in " + where);
    }
}

Interval interval_from_json(const nlohmann::json& j, const std::string& name) {
    if (!j.is_array() || j.size() != 2)
        throw ConfigError(name + " must be [lo, hi]");
    return {j[0].get<double>(), j[1].get<double>()};
}

int replica_count_from_json(const nlohmann::json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "full") return 0;
        throw ConfigError("replica_count must be a number or \"full\"");
    }
    return j.get<int>();
}

ReplicationStrategy strategy_from_json(const nlohmann::json& j) {
    if (j.is_string())
        return default_strategy(strategy_kind_from_string(j.get<std::string>()));
    if (!j.is_object()) throw ConfigError("strategy must be a name or object");
    reject_unknown_keys(j,
                        {"kind", "replica_count", "read_acks", "write_acks",
                         "shard_count", "service_time_ms"},
                        "strategy");
    if (!j.contains("kind")) throw ConfigError("strategy object needs \"kind\"");
    ReplicationStrategy s =
        default_strategy(strategy_kind_from_string(j["kind"].get<std::string>()));
    if (j.contains("replica_count"))
        s.replica_count = replica_count_from_json(j["replica_count"]);
    if (j.contains("read_acks")) s.read_acks = j["read_acks"].get<int>();
    if (j.contains("write_acks")) s.write_acks = j["write_acks"].get<int>();
    if (j.contains("shard_count")) s.shard_count = j["shard_count"].get<int>();
    if (j.contains("service_time_ms"))
        s.service_time_ms = j["service_time_ms"].get<double>();
    return s;
}

}  // namespace

NetworkProfile profile_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("profile must be an object");
    reject_unknown_keys(j,
                        {"intra_private_ms", "intra_public_ms", "cross_ms",
                         "download_kbps", "upload_kbps", "intra_kbps",
                         "spike_probability", "spike_multiplier", "seed"},
                        "profile");
    NetworkProfile p;
    if (j.contains("intra_private_ms"))
        p.intra_private_ms = interval_from_json(j["intra_private_ms"], "intra_private_ms");
    if (j.contains("intra_public_ms"))
        p.intra_public_ms = interval_from_json(j["intra_public_ms"], "intra_public_ms");
    if (j.contains("cross_ms"))
        p.cross_ms = interval_from_json(j["cross_ms"], "cross_ms");
    if (j.contains("download_kbps")) p.download_kbps = j["download_kbps"].get<double>();
    if (j.contains("upload_kbps")) p.upload_kbps = j["upload_kbps"].get<double>();
    if (j.contains("intra_kbps")) p.intra_kbps = j["intra_kbps"].get<double>();
    if (j.contains("spike_probability"))
        p.spike_probability = j["spike_probability"].get<double>();
    if (j.contains("spike_multiplier"))
        p.spike_multiplier = j["spike_multiplier"].get<double>();
    if (j.contains("seed")) p.seed = j["seed"].get<std::uint64_t>();
    p.validate();
    return p;
}

ExperimentMatrix experiment_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("experiment config must be an object");
    reject_unknown_keys(doc,
                        {"seed", "strategies", "workloads", "configs",
                         "total_nodes", "profile", "timeout_ms",
                         "client_threads", "repeats", "jobs", "workload"},
                        "experiment config");
    if (!doc.contains("seed"))
        throw ConfigError("experiment config requires an explicit seed");

    ExperimentMatrix m;
    m.seed = doc["seed"].get<std::uint64_t>();

    if (doc.contains("strategies")) {
        if (!doc["strategies"].is_array() || doc["strategies"].empty())
            throw ConfigError("strategies must be a non-empty array");
        for (const auto& j : doc["strategies"])
            m.strategies.push_back(strategy_from_json(j));
    } else {
        m.strategies = default_strategies();
    }

    if (doc.contains("workloads")) {
        if (!doc["workloads"].is_array() || doc["workloads"].empty())
            throw ConfigError("workloads must be a non-empty array");
        for (const auto& j : doc["workloads"]) {
            std::string label = j.get<std::string>();
            if (label.size() != 1)
                throw ConfigError("workload labels are single letters A-F");
            m.workloads.push_back(make_workload(label[0]));
        }
    } else {
        m.workloads = all_workloads();
    }

    if (doc.contains("workload")) {
        const auto& j = doc["workload"];
        reject_unknown_keys(j, {"load_count", "run_count", "scan_max"},
                            "workload overrides");
        for (auto& w : m.workloads) {
            if (j.contains("load_count")) w.load_count = j["load_count"].get<int>();
            if (j.contains("run_count")) w.run_count = j["run_count"].get<int>();
            if (j.contains("scan_max")) w.scan_max = j["scan_max"].get<int>();
        }
    }

    int total_nodes = doc.value("total_nodes", 8);
    if (!doc.contains("configs") ||
        (doc["configs"].is_string() && doc["configs"] == "all")) {
        m.configs = enumerate_configs(total_nodes);
    } else if (doc["configs"].is_array()) {
        for (const auto& j : doc["configs"]) {
            if (!j.is_array() || j.size() != 2)
                throw ConfigError("each config must be [n_local, m_remote]");
            ClusterConfig c{j[0].get<int>(), j[1].get<int>()};
            if (c.n_local < 0 || c.m_remote < 0 || c.total() < 1)
                throw ConfigError("cluster config needs at least one node");
            m.configs.push_back(c);
        }
    } else {
        throw ConfigError("configs must be \"all\" or an array of [n, m] pairs");
    }

    if (doc.contains("profile")) m.profile = profile_from_json(doc["profile"]);
    m.profile.seed = m.seed;

    m.timeout_ms = doc.value("timeout_ms", 1500.0);
    m.client_threads = doc.value("client_threads", 8);
    m.repeats = doc.value("repeats", 1);
    m.jobs = doc.value("jobs", 1);
    m.validate();
    return m;
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("invalid JSON in " + path + ": " + e.what());
    }
}

ExperimentMatrix load_experiment(const std::string& path) {
    return experiment_from_json(read_json_file(path));
}

void apply_override(nlohmann::json& doc, const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override must look like key.path=value: " + assignment);
    std::string path = assignment.substr(0, eq);
    std::string raw = assignment.substr(eq + 1);

    nlohmann::json value;
    try {
        value = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::parse_error&) {
        value = raw;  // bare words become strings
    }

    nlohmann::json* cur = &doc;
    std::size_t start = 0;
    for (;;) {
        auto dot = path.find('.', start);
        std::string seg = path.substr(start, dot - start);
        if (seg.empty()) throw ConfigError("empty path segment in " + assignment);
        if (dot == std::string::npos) {
            (*cur)[seg] = value;
            return;
        }
        cur = &(*cur)[seg];
        start = dot + 1;
    }
}

}  // namespace burstsim
