#pragma once

#include <stdexcept>
#include <string>

namespace burstsim {

/// Base class for all errors raised by the simulator.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid cluster shape (e.g. fewer than two total nodes).
struct TopologyError : Error {
    using Error::Error;
};

/// Experiment config file missing, malformed, or out of schema.
struct ConfigError : Error {
    using Error::Error;
};

/// Deployment phases executed out of order.
struct SequencingError : Error {
    using Error::Error;
};

/// Provisioning failed (provider failure, broken reachability).
struct ProvisionError : Error {
    ProvisionError(int phase, const std::string& what)
        : Error("phase " + std::to_string(phase) + ": " + what), phase(phase) {}
    int phase;
};

/// A WireGuard config could not be rendered (e.g. missing private key).
struct RenderError : Error {
    using Error::Error;
};

/// Replica placement impossible for the given strategy/config.
struct PlacementError : Error {
    using Error::Error;
};

}  // namespace burstsim
