#include "hamlab/presets.hpp"

namespace hamlab {

std::vector<FieldTerm> contractible_bump_terms(double amplitude, double radius) {
    return {BumpTerm{DiskPoint(), radius, amplitude}};
}

std::vector<FieldTerm> collar_terms(const std::string& core, double amplitude, double width) {
    return {CollarTerm{parse_word(core), width, amplitude}};
}

BumpTerm continuity_perturbation() { return BumpTerm{DiskPoint(0.22, 0.13), 0.5, 1.0}; }

std::vector<std::string> fallback_patterns() {
    return {"a1 b1", "b1 a1", "a1 B1", "A1 b1"};
}

} // namespace hamlab
