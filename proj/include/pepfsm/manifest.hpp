#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pepfsm/version.hpp"

namespace pepfsm {

inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string fnv1a64_hex(std::string_view bytes) {
    static const char digits[] = "0123456789abcdef";
    std::uint64_t h = fnv1a64(bytes);
    std::string hex(16, '0');
    for (int i = 15; i >= 0; --i) {
        hex[i] = digits[h & 0xf];
        h >>= 4;
    }
    return hex;
}

// Record of one CLI run: inputs, config echo, per-stage timings, and a
// content hash per emitted file. Timings vary run to run; the file hashes are
// the determinism contract.
struct RunManifest {
    std::string command;
    std::vector<std::string> inputs;
    std::vector<std::pair<std::string, std::string>> config;  // key/value echo, insertion order
    std::string output_dir;
    std::vector<std::pair<std::string, double>> timings_ms;
    std::vector<std::pair<std::string, std::string>> files;  // name -> fnv1a64 hex

    void add_file(const std::string& name, std::string_view content) {
        files.emplace_back(name, fnv1a64_hex(content));
    }

    std::string to_json() const {
        nlohmann::ordered_json j;
        j["tool"] = "pepfsm";
        j["version"] = std::string(kVersion);
        j["command"] = command;
        j["inputs"] = inputs;
        nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
        for (const auto& [key, value] : config) cfg[key] = value;
        j["config"] = cfg;
        j["output_dir"] = output_dir;
        nlohmann::ordered_json times = nlohmann::ordered_json::object();
        for (const auto& [key, value] : timings_ms) times[key] = value;
        j["timings_ms"] = times;
        j["files"] = nlohmann::ordered_json::array();
        for (const auto& [name, hash] : files)
            j["files"].push_back({{"name", name}, {"fnv1a64", hash}});
        return j.dump(2) + "\n";
    }
};

}  // namespace pepfsm
