#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace hamlab {

inline constexpr const char* kVersion = "hamlab 0.1.0";

// FNV-1a hash of the serialized config, embedded in every report so runs can
// be traced back to their exact inputs.
std::string config_hash(const nlohmann::json& config);

// Report envelope: kind, resolved config, config hash, seed, version, body,
// and a generated_at timestamp.  Everything except generated_at is a pure
// function of the inputs.
nlohmann::json make_report(const std::string& kind, const nlohmann::json& config,
                           std::uint64_t seed, const nlohmann::json& body);

// Serialization used for reproducibility comparisons.
std::string dump_without_timestamp(nlohmann::json report);

} // namespace hamlab
