#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hamlab {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Module invariant suites behind the `verify` subcommand.  `quick` trades
// sample counts for speed; the acceptance tests run the full sizes.
std::vector<CheckResult> verify_geometry(int genus, std::uint64_t seed, bool quick = false);
std::vector<CheckResult> verify_group(int genus, std::uint64_t seed, bool quick = false);
std::vector<CheckResult> verify_dynamics(int genus, std::uint64_t seed, bool quick = false);

bool all_pass(const std::vector<CheckResult>& results);

} // namespace hamlab
