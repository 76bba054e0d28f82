#include "hamlab/report.hpp"

#include <chrono>
#include <cstdio>

namespace hamlab {

std::string config_hash(const nlohmann::json& config) {
    std::string s = config.dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

nlohmann::json make_report(const std::string& kind, const nlohmann::json& config,
                           std::uint64_t seed, const nlohmann::json& body) {
    auto now = std::chrono::system_clock::now().time_since_epoch();
    return {{"kind", kind},
            {"config", config},
            {"config_hash", config_hash(config)},
            {"seed", seed},
            {"version", kVersion},
            {"generated_at",
             std::chrono::duration_cast<std::chrono::milliseconds>(now).count()},
            {"report", body}};
}

std::string dump_without_timestamp(nlohmann::json report) {
    report.erase("generated_at");
    return report.dump(2) + "\n";
}

} // namespace hamlab
