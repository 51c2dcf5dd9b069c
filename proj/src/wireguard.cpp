#include "burstsim/wireguard.hpp"

#include <sodium.h>

#include <cstring>
#include <sstream>

#include "burstsim/errors.hpp"

namespace burstsim {

namespace {

constexpr char kB64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int b64_index(char c) {
    const char* p = std::strchr(kB64Alphabet, c);
    if (!p || c == '\0') return -1;
    return static_cast<int>(p - kB64Alphabet);
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, ',')) out.push_back(trim(cur));
    return out;
}

}  // namespace

std::string base64_encode(const std::uint8_t* data, std::size_t len) {
    std::string out;
    out.reserve((len + 2) / 3 * 4);
    for (std::size_t i = 0; i < len; i += 3) {
        std::uint32_t v = static_cast<std::uint32_t>(data[i]) << 16;
        if (i + 1 < len) v |= static_cast<std::uint32_t>(data[i + 1]) << 8;
        if (i + 2 < len) v |= data[i + 2];
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.push_back(i + 1 < len ? kB64Alphabet[(v >> 6) & 63] : '=');
        out.push_back(i + 2 < len ? kB64Alphabet[v & 63] : '=');
    }
    return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
    std::vector<std::uint8_t> out;
    std::uint32_t buf = 0;
    int bits = 0;
    for (char c : text) {
        if (c == '=') break;
        int v = b64_index(c);
        if (v < 0) throw RenderError("invalid base64 character");
        buf = (buf << 6) | static_cast<std::uint32_t>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<std::uint8_t>((buf >> bits) & 0xff));
        }
    }
    return out;
}

void clamp_private_key(Key32& raw) {
    raw[0] &= 0xf8;
    raw[31] &= 0x7f;
    raw[31] |= 0x40;
}

Key32 derive_public_key(const Key32& private_key) {
    if (sodium_init() < 0) throw Error("libsodium init failed");
    Key32 pub{};
    crypto_scalarmult_curve25519_base(pub.data(), private_key.data());
    return pub;
}

KeyPair generate_keypair(RngStream& rng) {
    KeyPair kp;
    for (int i = 0; i < 4; ++i) {
        std::uint64_t w = rng.next_u64();
        for (int b = 0; b < 8; ++b)
            kp.private_key[static_cast<std::size_t>(i * 8 + b)] =
                static_cast<std::uint8_t>(w >> (8 * b));
    }
    clamp_private_key(kp.private_key);
    kp.public_key = derive_public_key(kp.private_key);
    return kp;
}

std::string KeyPair::private_b64() const {
    return base64_encode(private_key.data(), private_key.size());
}

std::string KeyPair::public_b64() const {
    return base64_encode(public_key.data(), public_key.size());
}

std::string render_wg_config(const WgInterfaceConfig& cfg) {
    if (cfg.private_key.empty())
        throw RenderError("wg config has no private key");

    std::string out;
    out += "[Interface]\n";
    out += "Address = " + cfg.interface_address + "\n";
    out += "ListenPort = " + std::to_string(cfg.listen_port) + "\n";
    out += "PrivateKey = " + cfg.private_key + "\n";
    for (const auto& peer : cfg.peers) {
        out += "\n[Peer]\n";
        out += "PublicKey = " + peer.public_key + "\n";
        out += "AllowedIPs = ";
        for (std::size_t i = 0; i < peer.allowed_ips.size(); ++i) {
            if (i) out += ", ";
            out += peer.allowed_ips[i];
        }
        out += "\n";
        if (peer.endpoint) out += "Endpoint = " + *peer.endpoint + "\n";
    }
    return out;
}

WgInterfaceConfig parse_wg_config(const std::string& text) {
    WgInterfaceConfig cfg;
    cfg.listen_port = 0;
    bool in_interface = false;
    bool seen_interface = false;
    WgPeerEntry* peer = nullptr;

    std::stringstream ss(text);
    std::string raw;
    while (std::getline(ss, raw)) {
        std::string line = trim(raw);
        if (line.empty()) continue;
        if (line == "[Interface]") {
            if (seen_interface) throw RenderError("duplicate [Interface] section");
            seen_interface = in_interface = true;
            peer = nullptr;
            continue;
        }
        if (line == "[Peer]") {
            in_interface = false;
            cfg.peers.emplace_back();
            peer = &cfg.peers.back();
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw RenderError("bad config line: " + line);
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (in_interface) {
            if (key == "Address") cfg.interface_address = val;
            else if (key == "ListenPort") cfg.listen_port = std::stoi(val);
            else if (key == "PrivateKey") cfg.private_key = val;
            else throw RenderError("unknown [Interface] key: " + key);
        } else if (peer) {
            if (key == "PublicKey") peer->public_key = val;
            else if (key == "AllowedIPs") peer->allowed_ips = split_csv(val);
            else if (key == "Endpoint") peer->endpoint = val;
            else throw RenderError("unknown [Peer] key: " + key);
        } else {
            throw RenderError("key outside any section: " + key);
        }
    }
    if (!seen_interface) throw RenderError("missing [Interface] section");
    return cfg;
}

}  // namespace burstsim
