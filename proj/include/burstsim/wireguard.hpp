#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "burstsim/rng.hpp"

namespace burstsim {

using Key32 = std::array<std::uint8_t, 32>;

/// Curve25519 keypair for one tunnel endpoint. Private key bytes carry the
/// standard clamping (low 3 bits of byte 0 cleared, top bit of byte 31
/// cleared, bit 6 of byte 31 set); the public key is the base-point scalar
/// multiple of the clamped private key.
struct KeyPair {
    Key32 private_key{};
    Key32 public_key{};

    std::string private_b64() const;
    std::string public_b64() const;

    bool operator==(const KeyPair&) const = default;
};

/// Clamp + derive from 32 stream bytes. Same stream state => same pair.
KeyPair generate_keypair(RngStream& rng);

/// Clamps `raw` in place per the Curve25519 convention.
void clamp_private_key(Key32& raw);

/// Base-point scalar multiplication of a clamped private key.
Key32 derive_public_key(const Key32& private_key);

std::string base64_encode(const std::uint8_t* data, std::size_t len);
std::vector<std::uint8_t> base64_decode(const std::string& text);

/// One [Peer] block: who may talk through the tunnel and, on the consumer
/// side, where to reach the donor.
struct WgPeerEntry {
    std::string public_key;                // base64
    std::vector<std::string> allowed_ips;  // CIDR list
    std::optional<std::string> endpoint;   // host:port, consumer side only

    bool operator==(const WgPeerEntry&) const = default;
};

/// Full wg0 interface config for one broker VM.
struct WgInterfaceConfig {
    std::string interface_address;  // e.g. "10.8.0.1/24"
    int listen_port = 51820;
    std::string private_key;        // base64
    std::vector<WgPeerEntry> peers;

    bool operator==(const WgInterfaceConfig&) const = default;
};

/// INI-style rendering, LF line endings, stable field order:
///   [Interface] Address / ListenPort / PrivateKey, then one [Peer] block
///   per entry with PublicKey / AllowedIPs / optional Endpoint.
/// Throws RenderError when the private key is missing.
std::string render_wg_config(const WgInterfaceConfig& cfg);

/// Inverse of render_wg_config; throws RenderError on malformed text.
WgInterfaceConfig parse_wg_config(const std::string& text);

}  // namespace burstsim
