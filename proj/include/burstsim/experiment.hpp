#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "burstsim/bench.hpp"

namespace burstsim {

/// Builds a matrix from the experiment document. Missing keys fall back to
/// defaults (all six strategies, workloads A-F, every 8-node split, the
/// calibrated profile); "seed" has no default and must be present.
ExperimentMatrix experiment_from_json(const nlohmann::json& doc);

/// Reads, parses, and validates an experiment file.
nlohmann::json read_json_file(const std::string& path);
ExperimentMatrix load_experiment(const std::string& path);

/// Applies one "dotted.path=value" assignment to the document; the value is
/// parsed as JSON when possible, else taken as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Profile sub-schema shared by experiment and provisioning configs.
NetworkProfile profile_from_json(const nlohmann::json& j);

}  // namespace burstsim
