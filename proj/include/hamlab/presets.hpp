#pragma once

#include "hamlab/dynamics.hpp"

namespace hamlab {

// Shipped example fields used by the verification suites, the experiments'
// default configs, and the acceptance run.

// single C-infinity bump in an embedded disk around the origin
std::vector<FieldTerm> contractible_bump_terms(double amplitude = 1.0, double radius = 0.55);

// collar field around the closed geodesic of the given generator class
std::vector<FieldTerm> collar_terms(const std::string& core, double amplitude = 2.0,
                                    double width = 0.85);

// fixed perturbation bump for the continuity experiment
BumpTerm continuity_perturbation();

// patterns tried in order by the unboundedness run until one is significant
std::vector<std::string> fallback_patterns();

} // namespace hamlab
