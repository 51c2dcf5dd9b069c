#pragma once

#include <cstdint>
#include <string>

#include "burstsim/rng.hpp"
#include "burstsim/topology.hpp"

namespace burstsim {

/// Closed latency interval in milliseconds.
struct Interval {
    double lo;
    double hi;

    double midpoint() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }

    bool operator==(const Interval&) const = default;
};

/// Calibrated model of the hybrid network: per-link-class latency intervals,
/// asymmetric cross-cloud bandwidth, and an optional multiplicative latency
/// spike that stands in for WAN unpredictability. Defaults are the measured
/// testbed values this simulator is calibrated against.
struct NetworkProfile {
    Interval intra_private_ms{0.5, 0.7};
    Interval intra_public_ms{1.1, 1.4};
    Interval cross_ms{228.5, 230.5};
    double download_kbps = 11191.0;  // KByte/s, Public -> Private
    double upload_kbps = 1009.0;     // KByte/s, Private -> Public
    double intra_kbps = 125000.0;    // KByte/s, same-datacenter (~1 Gbps)
    double spike_probability = 0.0;  // fraction of samples spiked
    double spike_multiplier = 5.0;   // applied to a spiked sample
    std::uint64_t seed = 0;

    /// Throws ConfigError on nonsensical calibration (empty/negative
    /// intervals, cross not above intra, probability outside [0,1], ...).
    void validate() const;

    bool operator==(const NetworkProfile&) const = default;
};

enum class Direction { Up, Down, Intra };

const char* to_string(Direction d);

/// Aggregate of a simulated ping run.
struct ProbeStats {
    int packets_sent = 0;
    double mean_ms = 0;
    double min_ms = 0;
    double max_ms = 0;
    double stddev_ms = 0;
};

/// One RTT-equivalent latency draw for a src->dst message. Self-messages are
/// 0 ms and consume no randomness. Every other draw is uniform over the
/// interval picked by the endpoint datacenters, then spiked with probability
/// spike_probability. The spike coin is always consumed so call sequences
/// stay aligned across profiles that differ only in spike settings.
double sample_latency(const NodeSpec& src, const NodeSpec& dst,
                      const NetworkProfile& profile, RngStream& rng);

/// Bandwidth-limited transfer time in ms for `bytes` bytes (KByte = 1024 B).
/// Linear in bytes; 0 bytes take 0 ms.
double transfer_time_ms(double bytes, Direction direction,
                        const NetworkProfile& profile);

/// Emulated ping: aggregates `packets` independent latency draws.
ProbeStats ping_probe(const NodeSpec& src, const NodeSpec& dst, int packets,
                      const NetworkProfile& profile, std::uint64_t seed);

/// Emulated iperf: back-to-back chunk transfers for duration_s, reported as
/// achieved KByte/s.
double iperf_probe(Direction direction, double duration_s,
                   const NetworkProfile& profile);

/// Single-line JSON rendering of ProbeStats for the netprobe CLI.
std::string to_json_line(const ProbeStats& stats);

}  // namespace burstsim
