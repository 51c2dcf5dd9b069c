#include "burstsim/netsim.hpp"

#include <cmath>
#include <cstdio>

#include "burstsim/errors.hpp"

namespace burstsim {

namespace {

constexpr double kBytesPerKByte = 1024.0;

void check_interval(const Interval& iv, const char* name) {
    if (!(iv.lo > 0) || !(iv.lo <= iv.hi))
        throw ConfigError(std::string("profile interval ") + name +
                          " must satisfy 0 < lo <= hi");
}

double bandwidth_kbps(Direction d, const NetworkProfile& p) {
    switch (d) {
        case Direction::Up: return p.upload_kbps;
        case Direction::Down: return p.download_kbps;
        case Direction::Intra: return p.intra_kbps;
    }
    return p.intra_kbps;
}

}  // namespace

const char* to_string(Direction d) {
    switch (d) {
        case Direction::Up: return "up";
        case Direction::Down: return "down";
        case Direction::Intra: return "intra";
    }
    return "?";
}

void NetworkProfile::validate() const {
    check_interval(intra_private_ms, "intra_private_ms");
    check_interval(intra_public_ms, "intra_public_ms");
    check_interval(cross_ms, "cross_ms");
    if (cross_ms.lo <= intra_private_ms.hi || cross_ms.lo <= intra_public_ms.hi)
        throw ConfigError("cross_ms must lie strictly above both intra intervals");
    if (!(download_kbps > 0) || !(upload_kbps > 0) || !(intra_kbps > 0))
        throw ConfigError("bandwidths must be positive");
    if (!(spike_probability >= 0.0 && spike_probability <= 1.0))
        throw ConfigError("spike_probability must be in [0,1]");
    if (!(spike_multiplier >= 1.0))
        throw ConfigError("spike_multiplier must be >= 1");
}

double sample_latency(const NodeSpec& src, const NodeSpec& dst,
                      const NetworkProfile& profile, RngStream& rng) {
    if (src.node_id == dst.node_id) return 0.0;

    const Interval* iv = &profile.cross_ms;
    if (src.datacenter == dst.datacenter)
        iv = src.datacenter == Cloud::Private ? &profile.intra_private_ms
                                              : &profile.intra_public_ms;

    double v = rng.uniform(iv->lo, iv->hi);
    // spike coin drawn unconditionally: identical call sequences across
    // spike_probability settings, so per-op latency is monotone in it
    double coin = rng.next_double();
    if (coin < profile.spike_probability) v *= profile.spike_multiplier;
    return v;
}

double transfer_time_ms(double bytes, Direction direction,
                        const NetworkProfile& profile) {
    if (bytes <= 0.0) return 0.0;
    double bytes_per_ms = bandwidth_kbps(direction, profile) * kBytesPerKByte / 1000.0;
    return bytes / bytes_per_ms;
}

ProbeStats ping_probe(const NodeSpec& src, const NodeSpec& dst, int packets,
                      const NetworkProfile& profile, std::uint64_t seed) {
    if (packets < 1) throw ConfigError("ping_probe needs at least 1 packet");

    RngStream rng = RngStream::derive(seed, "netsim/ping");
    ProbeStats s;
    s.packets_sent = packets;
    double sum = 0, sumsq = 0;
    for (int i = 0; i < packets; ++i) {
        double v = sample_latency(src, dst, profile, rng);
        if (i == 0) {
            s.min_ms = s.max_ms = v;
        } else {
            s.min_ms = std::min(s.min_ms, v);
            s.max_ms = std::max(s.max_ms, v);
        }
        sum += v;
        sumsq += v * v;
    }
    s.mean_ms = sum / packets;
    double var = sumsq / packets - s.mean_ms * s.mean_ms;
    s.stddev_ms = var > 0 ? std::sqrt(var) : 0.0;
    return s;
}

double iperf_probe(Direction direction, double duration_s,
                   const NetworkProfile& profile) {
    if (!(duration_s > 0)) throw ConfigError("iperf duration must be positive");

    constexpr double kChunkBytes = 256.0 * 1024.0;
    const double duration_ms = duration_s * 1000.0;
    const double chunk_ms = transfer_time_ms(kChunkBytes, direction, profile);

    double elapsed_ms = 0.0;
    double sent_bytes = 0.0;
    while (elapsed_ms + chunk_ms <= duration_ms) {
        elapsed_ms += chunk_ms;
        sent_bytes += kChunkBytes;
    }
    // partial chunk in flight when the clock runs out
    sent_bytes += kChunkBytes * (duration_ms - elapsed_ms) / chunk_ms;
    return sent_bytes / kBytesPerKByte / duration_s;
}

std::string to_json_line(const ProbeStats& stats) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "{\"packets_sent\":%d,\"mean_ms\":%.4f,\"min_ms\":%.4f,"
                  "\"max_ms\":%.4f,\"stddev_ms\":%.4f}",
                  stats.packets_sent, stats.mean_ms, stats.min_ms, stats.max_ms,
                  stats.stddev_ms);
    return buf;
}

}  // namespace burstsim
