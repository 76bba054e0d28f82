#pragma once

#include "hamlab/surface_group.hpp"

#include <array>
#include <complex>
#include <vector>

#include <json.hpp>

namespace hamlab {

// Point of the open Poincare unit disk.
struct DiskPoint {
    double x = 0.0;
    double y = 0.0;

    DiskPoint() = default;
    DiskPoint(double px, double py);
    explicit DiskPoint(std::complex<double> z) : DiskPoint(z.real(), z.imag()) {}

    std::complex<double> z() const { return {x, y}; }
    double norm2() const { return x * x + y * y; }
};

// Orientation-preserving isometry of the hyperbolic plane, stored as a real
// unit-determinant 2x2 matrix acting on the upper half-plane and conjugated
// to the disk by the Cayley transform.  Interpreted modulo global sign.
struct Isometry {
    // row-major (a b; c d)
    std::array<double, 4> m{1.0, 0.0, 0.0, 1.0};

    static Isometry identity() { return {}; }
    // rotation about the disk origin by angle phi
    static Isometry rotation(double phi);
    // translation along the ray at angle phi by hyperbolic distance s
    static Isometry translation(double phi, double s);
    // from the disk-model Moebius map z -> (alpha z + beta)/(conj(beta) z + conj(alpha))
    static Isometry from_disk_mobius(std::complex<double> alpha, std::complex<double> beta);

    double det() const { return m[0] * m[3] - m[1] * m[2]; }
    double trace() const { return m[0] + m[3]; }
    Isometry inverse() const;
    void renormalize(); // rescale so det == 1

    // max entry distance to +I or -I, whichever is smaller
    double identity_error() const;
    bool is_identity(double tol = 1e-8) const { return identity_error() <= tol; }
};

Isometry compose(const Isometry& a, const Isometry& b);
DiskPoint apply(const Isometry& m, const DiskPoint& p);

// Hyperbolic distance for the metric 2|dz|/(1-|z|^2).
double distance(const DiskPoint& p, const DiskPoint& q);

// Constant-speed point on the geodesic arc from p to q, t in [0,1].
DiskPoint geodesic_point(const DiskPoint& p, const DiskPoint& q, double t);

// Hyperbolic area density 4/(1-|p|^2)^2 of the form lambda^2 dx dy.
double area_density(const DiskPoint& p);

// Euclidean circle orthogonal to the unit circle, carrying one polygon side.
struct SideGeodesic {
    std::complex<double> center;
    double radius = 0.0;
};

struct SidePairing {
    int partner = -1;
    Isometry gamma;  // maps side `partner` onto this side; deck move across this side
    Letter letter;   // generator letter represented by gamma
};

// Regular 4g-gon fundamental domain of the genus-g surface group, centered
// at the origin, with side pairings labeled so that the boundary word read
// counterclockwise from vertex 0 is prod [a_i, b_i].
class FundamentalDomain {
  public:
    explicit FundamentalDomain(int genus);

    int genus() const { return genus_; }
    int num_sides() const { return 4 * genus_; }
    const std::vector<DiskPoint>& vertices() const { return vertices_; }
    const std::vector<SideGeodesic>& sides() const { return sides_; }
    const std::vector<SidePairing>& pairings() const { return pairings_; }
    double vertex_radius() const { return vertex_radius_; }

    // Deck matrix of a single generator letter.
    const Isometry& generator(const Letter& l) const;
    Isometry matrix_of(const Word& w) const;

    // -1 when p lies in the closed polygon, otherwise the lowest index of a
    // violated side half-plane.
    int locate(const DiskPoint& p, double tol = 1e-12) const;
    bool contains(const DiskPoint& p, double tol = 1e-12) const { return locate(p, tol) < 0; }

    // Folds p into the closed domain by greedy side crossings.  Returns the
    // domain representative p' and a word w with matrix_of(w) * p' == p.
    std::pair<DiskPoint, Word> normalize(const DiskPoint& p) const;

    nlohmann::json to_json() const;

  private:
    int genus_;
    double vertex_radius_;
    std::vector<DiskPoint> vertices_;
    std::vector<SideGeodesic> sides_;
    std::vector<SidePairing> pairings_;
    std::vector<Isometry> gen_;     // by generator index 1..2g
    std::vector<Isometry> gen_inv_;
};

nlohmann::json to_json(const Isometry& m);

// Monte Carlo hyperbolic area of the fundamental domain (box sampling with
// the area density as weight).  Deterministic in the seed regardless of
// thread count; `parallel` selects the OpenMP kernel or the serial reference.
double mc_domain_area(const FundamentalDomain& dom, int n_samples, std::uint64_t seed,
                      bool parallel = true);

} // namespace hamlab
