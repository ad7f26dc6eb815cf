#pragma once

// Provenance manifests. Every artifact file the tools emit gets a sibling
// <name>.manifest.json recording the command that produced it, a hash of the
// effective config, the seed, and a git-style blob hash of the artifact
// bytes. Manifests contain no wall-clock data so a rerun with the same seed
// and config reproduces them byte for byte.

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace questforge {

// Minimal SHA-1, sufficient for content addressing. Input sizes here are
// megabytes at most, so the straightforward single-pass form is fine.
inline std::string sha1_hex(std::string_view data) {
    std::uint32_t h[5] = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u,
                          0xC3D2E1F0u};
    std::uint64_t ml = std::uint64_t(data.size()) * 8;
    std::string msg(data);
    msg.push_back(char(0x80));
    while (msg.size() % 64 != 56) msg.push_back('\0');
    for (int i = 7; i >= 0; --i) msg.push_back(char((ml >> (i * 8)) & 0xff));

    auto rol = [](std::uint32_t v, int n) {
        return (v << n) | (v >> (32 - n));
    };
    for (std::size_t off = 0; off < msg.size(); off += 64) {
        std::uint32_t w[80];
        for (int i = 0; i < 16; ++i) {
            w[i] = (std::uint32_t(std::uint8_t(msg[off + i * 4])) << 24) |
                   (std::uint32_t(std::uint8_t(msg[off + i * 4 + 1])) << 16) |
                   (std::uint32_t(std::uint8_t(msg[off + i * 4 + 2])) << 8) |
                   std::uint32_t(std::uint8_t(msg[off + i * 4 + 3]));
        }
        for (int i = 16; i < 80; ++i)
            w[i] = rol(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
        std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
        for (int i = 0; i < 80; ++i) {
            std::uint32_t f, k;
            if (i < 20) {
                f = (b & c) | (~b & d);
                k = 0x5A827999u;
            } else if (i < 40) {
                f = b ^ c ^ d;
                k = 0x6ED9EBA1u;
            } else if (i < 60) {
                f = (b & c) | (b & d) | (c & d);
                k = 0x8F1BBCDCu;
            } else {
                f = b ^ c ^ d;
                k = 0xCA62C1D6u;
            }
            std::uint32_t t = rol(a, 5) + f + e + k + w[i];
            e = d;
            d = c;
            c = rol(b, 30);
            b = a;
            a = t;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
    }
    char buf[41];
    std::snprintf(buf, sizeof buf, "%08x%08x%08x%08x%08x", h[0], h[1], h[2],
                  h[3], h[4]);
    return std::string(buf, 40);
}

// Hash content the way git hashes a blob, so artifacts can be checked against
// object databases if anyone cares to.
inline std::string git_blob_hash(std::string_view content) {
    std::string blob = "blob " + std::to_string(content.size());
    blob.push_back('\0');
    blob.append(content);
    return sha1_hex(blob);
}

struct Manifest {
    std::string schema = "questforge.manifest.v1";
    std::string command;      // the CLI invocation or internal op name
    std::string config_hash;  // sha1 of the canonical config rendering
    std::uint64_t seed = 0;
    std::string content_hash; // git blob hash of the artifact bytes
    std::uint64_t content_bytes = 0;

    nlohmann::json to_json() const {
        return {{"schema", schema},         {"command", command},
                {"config_hash", config_hash}, {"seed", seed},
                {"content_hash", content_hash}, {"content_bytes", content_bytes}};
    }

    static Manifest from_json(const nlohmann::json& j) {
        Manifest m;
        m.schema = j.at("schema").get<std::string>();
        m.command = j.at("command").get<std::string>();
        m.config_hash = j.at("config_hash").get<std::string>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.content_hash = j.at("content_hash").get<std::string>();
        m.content_bytes = j.at("content_bytes").get<std::uint64_t>();
        return m;
    }
};

inline std::string read_file_or_throw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file_or_throw(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) throw std::runtime_error("short write: " + path);
}

// Writes the artifact and its manifest side by side.
inline Manifest write_artifact(const std::string& path, std::string_view content,
                               const std::string& command,
                               const std::string& config_text,
                               std::uint64_t seed) {
    write_file_or_throw(path, content);
    Manifest m;
    m.command = command;
    m.config_hash = sha1_hex(config_text);
    m.seed = seed;
    m.content_hash = git_blob_hash(content);
    m.content_bytes = content.size();
    write_file_or_throw(path + ".manifest.json", m.to_json().dump(2) + "\n");
    return m;
}

// Returns true when the manifest next to `path` matches the file's bytes.
inline bool verify_artifact(const std::string& path) {
    std::string content = read_file_or_throw(path);
    auto j = nlohmann::json::parse(read_file_or_throw(path + ".manifest.json"));
    Manifest m = Manifest::from_json(j);
    return m.content_hash == git_blob_hash(content) &&
           m.content_bytes == content.size();
}

} // namespace questforge
