#include "coinpi/manifest.hpp"

#include <cstdio>

namespace coinpi {

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (const char c : bytes) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001b3ull;
    }
    return hash;
}

std::string fnv1a64_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return std::string(buf);
}

nlohmann::ordered_json RunManifest::to_json_value() const {
    nlohmann::ordered_json j;
    j["subcommand"] = subcommand;
    j["config"] = config;
    j["seed"] = seed;
    j["version"] = version;
    j["wall_time_ms"] = wall_time_ms;
    j["output_checksum"] = output_checksum;
    return j;
}

std::string RunManifest::to_json() const { return to_json_value().dump(); }

} // namespace coinpi
