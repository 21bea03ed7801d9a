#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

namespace coinpi {

inline constexpr std::string_view kToolVersion = "1.0.0";

// FNV-1a, 64-bit. Stable fingerprint for output payloads.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string fnv1a64_hex(std::string_view bytes);

// Provenance wrapper attached to every CLI output: what ran, with which
// flags, and a checksum of the payload it accompanies. output_checksum
// covers the payload bytes only (never the manifest itself), so a rerun
// can be verified by comparing checksums alone. wall_time_ms is the one
// volatile field; reproducibility comparisons exclude it.
struct RunManifest {
    std::string subcommand;
    std::string config; // canonical "flag=value" echo, space separated
    std::uint64_t seed = 0;
    std::string version = std::string(kToolVersion);
    double wall_time_ms = 0.0;
    std::string output_checksum;

    nlohmann::ordered_json to_json_value() const;
    std::string to_json() const; // compact single line, for CSV comments
};

} // namespace coinpi
