#pragma once

#include "hamlab/geometry.hpp"
#include "hamlab/surface_group.hpp"

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include <json.hpp>

namespace hamlab {

struct TangentVector {
    double vx = 0.0;
    double vy = 0.0;
};

struct BumpTerm {
    DiskPoint center;
    double radius = 0.0;
    double amplitude = 0.0;
};

struct CollarTerm {
    Word core;
    double width = 0.0;
    double amplitude = 0.0;
};

using FieldTerm = std::variant<BumpTerm, CollarTerm>;

// Smooth zero-mean Gamma-invariant Hamiltonian on the quotient surface,
// given as a sum of compactly supported radial bumps and collar profiles
// around closed geodesics.  Invariance is by construction: each term is
// evaluated against every deck translate of its support that can reach the
// fundamental domain.
class ScalarField {
  public:
    ScalarField(const FundamentalDomain& dom, std::vector<FieldTerm> terms);

    const FundamentalDomain& domain() const { return *dom_; }
    const std::vector<FieldTerm>& terms() const { return terms_; }
    double mean_offset() const { return mean_offset_; }
    double sup_norm() const { return sup_norm_; }

    // field value at any lift point near the domain
    double value(const DiskPoint& p) const;
    // exact Euclidean gradient of the field value
    TangentVector euclidean_gradient(const DiskPoint& p) const;
    // Hamiltonian vector field (dH/dy, -dH/dx) / lambda^2
    TangentVector hamiltonian_field(const DiskPoint& p) const;
    // hyperbolic norm of the gradient of H at p
    double gradient_norm(const DiskPoint& p) const;

    nlohmann::json to_json() const;
    static ScalarField from_json(const FundamentalDomain& dom, const nlohmann::json& j);

  private:
    double raw_value(const DiskPoint& p) const;

    const FundamentalDomain* dom_;
    std::vector<FieldTerm> terms_;
    double mean_offset_ = 0.0;
    double sup_norm_ = 0.0;

    // precomputed deck translates of term supports
    struct BumpLift {
        DiskPoint center;
        double radius;
        double amplitude;
    };
    struct CollarLift {
        Isometry to_axis; // maps the translated axis to the imaginary UHP axis
        double width;
        double amplitude;
    };
    std::vector<BumpLift> bump_lifts_;
    std::vector<CollarLift> collar_lifts_;
};

struct TrajectorySample {
    double t = 0.0;
    DiskPoint point;      // domain representative
    Letter crossed;       // valid when has_crossing
    bool has_crossing = false;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    Word deck;            // matrix_of(deck) * endpoint == continuous lift endpoint
    DiskPoint endpoint;
    double h_drift = 0.0; // max |H(x_t) - H(x_0)|
};

// Classical fixed-step 4th-order integration of the flow lift over [0, T],
// folding back into the domain at side crossings.  record_stride 0 keeps
// only the endpoint.
Trajectory integrate_flow(const ScalarField& H, const DiskPoint& x0, double T, double dt,
                          int record_stride = 1);

struct LoopClass {
    Word word; // based at the origin, closed by radial geodesics
};

struct FlowSegment {
    const ScalarField* field = nullptr;
    double duration = 1.0;
};
using CompositeFlow = std::vector<FlowSegment>;

// Class of s_{zx} * (flow path over p repetitions) * s_{h^p(x), z}.
LoopClass loop_class(const CompositeFlow& flow, const DiskPoint& x, int p, double dt);
LoopClass loop_class(const ScalarField& H, const DiskPoint& x, int p, double dt);

struct LevelLoopOptions {
    double grad_threshold = 1e-4;
    double return_eps = 1e-5;
    double arc_step = 1e-3;
    double length_cap = 1000.0; // hyperbolic arclength cap for the trace
};

// Traces the level curve of H through x at unit hyperbolic speed until first
// return; returns the loop class of s_{zx} * level curve * s_{xz}.
LoopClass level_loop(const ScalarField& H, const DiskPoint& x, const LevelLoopOptions& opt = {});

struct Decomposition {
    int k = 0;
    int remainder_length = 0;
};

// Searches the power k of the level-loop class that best cancels inside the
// flow-loop class [h^p_x], over insertion positions and a window of k values.
Decomposition decompose_trajectory(const ScalarField& H, const DiskPoint& x, int p, double dt,
                                   const LevelLoopOptions& opt = {});

struct L1Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

// T * integral of |X_H| over the surface, by area-weighted Monte Carlo.
L1Estimate l1_length(const ScalarField& H, double T, int n_samples, std::uint64_t seed);

// Area-uniform rejection sampler over the fundamental domain.
class DomainSampler {
  public:
    explicit DomainSampler(const FundamentalDomain& dom);
    DiskPoint sample(std::uint64_t seed) const; // deterministic per seed

  private:
    const FundamentalDomain* dom_;
    double box_radius_;
    double density_max_;
};

} // namespace hamlab
