#pragma once

#include "hamlab/dynamics.hpp"
#include "hamlab/quasimorphism.hpp"

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace hamlab {

struct PsiEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    int samples = 0;
    int p_used = 0;
    int skipped = 0;
    bool reliable = true; // skip rate <= 5%

    nlohmann::json to_json() const;
};

struct PsiOptions {
    double dt = 1e-2;
    bool parallel = true;
};

// Monte Carlo estimate of Area * avg_x psi([ (f^p)_x ]) / p over area-uniform
// sample points.  Sample jobs are independent with per-index seeds and are
// reduced by an ordered fold, so the result does not depend on scheduling.
PsiEstimate estimate_psi(const CountingQM& qm, const CompositeFlow& flow, int p, int n_samples,
                         std::uint64_t seed, const PsiOptions& opt = {});

// Serial reference implementation; must agree bit-for-bit with estimate_psi.
PsiEstimate estimate_psi_serial(const CountingQM& qm, const CompositeFlow& flow, int p,
                                int n_samples, std::uint64_t seed, const PsiOptions& opt = {});

// n * |psi_value| / defect, the autonomous-norm lower bound of the
// homogeneous-quasi-morphism argument.  Rejects defect <= 0.
double norm_lower_bound(double psi_value, double defect, int n);

struct VanishingReport {
    PsiEstimate estimate;
    std::vector<std::string> level_classes; // distinct, up to cyclic reduction
    bool precondition_ok = false;           // qm vanishes on the level classes
    int empirical_k = 0;                    // max remainder length over probes
    double defect = 0.0;                    // empirical defect estimate
    double bound_rhs = 0.0;                 // 2 * defect * (K + 1) / p
    int bound_violations = 0;               // samples with |psi|/p above bound_rhs
    int probes = 0;

    nlohmann::json to_json() const;
};

struct ExperimentOptions {
    double dt = 1e-2;
    int defect_samples = 2000;
    int defect_max_len = 20;
    int probe_points = 12; // level-loop / decomposition probes
    LevelLoopOptions level;
};

VanishingReport vanishing_experiment(const CountingQM& qm, const ScalarField& H, int p,
                                     int n_samples, std::uint64_t seed,
                                     const ExperimentOptions& opt = {});

struct UnboundednessRow {
    int n = 0;
    double psi_n = 0.0;   // n * mean(f)
    double defect = 0.0;
    double lower_bound = 0.0;
};

struct UnboundednessReport {
    PsiEstimate direct;        // estimate for f
    PsiEstimate direct_double; // estimate for f^2 at the same p (cross-check)
    double defect = 0.0;
    bool significant = false;  // |mean| > 3 sigma
    std::vector<UnboundednessRow> rows;

    nlohmann::json to_json() const;
};

UnboundednessReport unboundedness_experiment(const CountingQM& qm, const CompositeFlow& flow,
                                             const std::vector<int>& n_list, int p, int n_samples,
                                             std::uint64_t seed, const ExperimentOptions& opt = {});

struct ContinuityRow {
    double epsilon = 0.0;
    double difference = 0.0; // |mean(h_eps) - mean(h)|
    double combined_err = 0.0;
};

struct ContinuityReport {
    PsiEstimate base;
    std::vector<ContinuityRow> rows;

    nlohmann::json to_json() const;
};

// Re-estimates with the last flow segment's Hamiltonian perturbed by the
// epsilon-scaled bump; differences to the base estimate should shrink with
// epsilon.  Shared seeds make base and perturbed runs strongly correlated.
ContinuityReport continuity_experiment(const CountingQM& qm, const CompositeFlow& flow,
                                       const BumpTerm& perturbation,
                                       const std::vector<double>& epsilons, int p, int n_samples,
                                       std::uint64_t seed, const ExperimentOptions& opt = {});

} // namespace hamlab
