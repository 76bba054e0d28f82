#include "hamlab/geometry.hpp"

#include "hamlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace hamlab {

using cplx = std::complex<double>;

namespace {

constexpr double kBoundaryMargin = 1e-12;
constexpr double kPi = 3.14159265358979323846;

cplx cayley_to_uhp(cplx z) { return cplx(0, 1) * (z + 1.0) / (1.0 - z); }
cplx cayley_to_disk(cplx w) { return (w - cplx(0, 1)) / (w + cplx(0, 1)); }

} // namespace

DiskPoint::DiskPoint(double px, double py) : x(px), y(py) {
    if (x * x + y * y >= 1.0 - kBoundaryMargin)
        throw range_error("point outside the open unit disk");
}

Isometry Isometry::from_disk_mobius(cplx alpha, cplx beta) {
    // conjugate the SU(1,1) matrix (alpha beta; conj beta conj alpha) by the
    // Cayley transform C = (i i; -1 1); scalar factors cancel
    const cplx C[4] = {cplx(0, 1), cplx(0, 1), cplx(-1, 0), cplx(1, 0)};
    const cplx detC = C[0] * C[3] - C[1] * C[2];
    const cplx Ci[4] = {C[3] / detC, -C[1] / detC, -C[2] / detC, C[0] / detC};
    const cplx M[4] = {alpha, beta, std::conj(beta), std::conj(alpha)};

    cplx T[4]; // C * M
    T[0] = C[0] * M[0] + C[1] * M[2];
    T[1] = C[0] * M[1] + C[1] * M[3];
    T[2] = C[2] * M[0] + C[3] * M[2];
    T[3] = C[2] * M[1] + C[3] * M[3];
    cplx R[4]; // (C * M) * C^-1
    R[0] = T[0] * Ci[0] + T[1] * Ci[2];
    R[1] = T[0] * Ci[1] + T[1] * Ci[3];
    R[2] = T[2] * Ci[0] + T[3] * Ci[2];
    R[3] = T[2] * Ci[1] + T[3] * Ci[3];

    Isometry out;
    for (int i = 0; i < 4; ++i) {
        if (std::abs(R[i].imag()) > 1e-9 * (1.0 + std::abs(R[i])))
            throw range_error("disk Moebius map does not conjugate to SL(2,R)");
        out.m[i] = R[i].real();
    }
    out.renormalize();
    return out;
}

Isometry Isometry::rotation(double phi) {
    return from_disk_mobius(std::polar(1.0, phi / 2.0), 0.0);
}

Isometry Isometry::translation(double phi, double s) {
    // conjugate of the x-axis translation z -> (z + tanh(s/2)) / (1 + tanh(s/2) z)
    Isometry t = from_disk_mobius(std::cosh(s / 2.0), std::sinh(s / 2.0));
    return compose(compose(rotation(phi), t), rotation(-phi));
}

void Isometry::renormalize() {
    double d = det();
    if (d <= 0.0) throw range_error("isometry matrix has non-positive determinant");
    double s = 1.0 / std::sqrt(d);
    for (double& e : m) e *= s;
}

Isometry Isometry::inverse() const {
    // adjugate; the determinant is 1 by construction, and evaluating it for
    // large-entry products is catastrophically ill-conditioned, so do not
    // rescale here
    Isometry out;
    out.m = {m[3], -m[1], -m[2], m[0]};
    return out;
}

double Isometry::identity_error() const {
    double plus = 0.0, minus = 0.0;
    const double id[4] = {1.0, 0.0, 0.0, 1.0};
    for (int i = 0; i < 4; ++i) {
        plus = std::max(plus, std::abs(m[i] - id[i]));
        minus = std::max(minus, std::abs(m[i] + id[i]));
    }
    return std::min(plus, minus);
}

Isometry compose(const Isometry& a, const Isometry& b) {
    Isometry out;
    out.m[0] = a.m[0] * b.m[0] + a.m[1] * b.m[2];
    out.m[1] = a.m[0] * b.m[1] + a.m[1] * b.m[3];
    out.m[2] = a.m[2] * b.m[0] + a.m[3] * b.m[2];
    out.m[3] = a.m[2] * b.m[1] + a.m[3] * b.m[3];
    // det stays 1 up to rounding.  Rescale only while entries are moderate:
    // there the det evaluation is well-conditioned and the correction keeps
    // long near-identity products accurate, while for large entries the
    // cancellation in det would inject garbage (see Isometry::inverse).
    double scale = 0.0;
    for (double e : out.m) scale = std::max(scale, std::abs(e));
    if (scale < 1e3) out.renormalize();
    return out;
}

DiskPoint apply(const Isometry& iso, const DiskPoint& p) {
    cplx w = cayley_to_uhp(p.z());
    cplx w2 = (iso.m[0] * w + iso.m[1]) / (iso.m[2] * w + iso.m[3]);
    cplx z2 = cayley_to_disk(w2);
    if (std::norm(z2) >= 1.0 - kBoundaryMargin)
        throw range_error("isometry image left the open disk");
    return DiskPoint(z2);
}

double distance(const DiskPoint& p, const DiskPoint& q) {
    cplx a = p.z(), b = q.z();
    double t = std::abs((a - b) / (1.0 - std::conj(a) * b));
    return 2.0 * std::atanh(std::min(t, 1.0 - 1e-16));
}

DiskPoint geodesic_point(const DiskPoint& p, const DiskPoint& q, double t) {
    cplx a = p.z(), b = q.z();
    // move p to the origin, walk the radial geodesic, move back
    cplx b0 = (b - a) / (1.0 - std::conj(a) * b);
    double d = 2.0 * std::atanh(std::abs(b0));
    if (d == 0.0) return p;
    cplx dir = b0 / std::abs(b0);
    cplx pt = dir * std::tanh(t * d / 2.0);
    cplx back = (pt + a) / (1.0 + std::conj(a) * pt);
    return DiskPoint(back);
}

double area_density(const DiskPoint& p) {
    double s = 1.0 - p.norm2();
    return 4.0 / (s * s);
}

namespace {

// Circle through z1, z2 orthogonal to the unit circle.
SideGeodesic side_through(cplx z1, cplx z2) {
    // 2 Re(conj(c) z) = |z|^2 + 1 for both endpoints
    double a11 = 2.0 * z1.real(), a12 = 2.0 * z1.imag(), b1 = std::norm(z1) + 1.0;
    double a21 = 2.0 * z2.real(), a22 = 2.0 * z2.imag(), b2 = std::norm(z2) + 1.0;
    double det = a11 * a22 - a12 * a21;
    if (std::abs(det) < 1e-14)
        throw range_error("side endpoints lie on a diameter");
    double cx = (b1 * a22 - b2 * a12) / det;
    double cy = (a11 * b2 - a21 * b1) / det;
    SideGeodesic s;
    s.center = {cx, cy};
    s.radius = std::sqrt(cx * cx + cy * cy - 1.0);
    return s;
}

// Unit tangent at `at` along the side circle, oriented toward `toward`.
cplx side_tangent(const SideGeodesic& s, cplx at, cplx toward) {
    cplx t = cplx(0, 1) * (at - s.center);
    t /= std::abs(t);
    if ((t.real() * (toward - at).real() + t.imag() * (toward - at).imag()) < 0.0) t = -t;
    return t;
}

// Interior angle of the regular n-gon with vertices at Euclidean radius rho.
double interior_angle(int n, double rho) {
    cplx v0 = rho;
    cplx v1 = rho * std::polar(1.0, 2.0 * kPi / n);
    cplx vm = rho * std::polar(1.0, -2.0 * kPi / n);
    SideGeodesic s01 = side_through(v0, v1);
    SideGeodesic sm0 = side_through(vm, v0);
    cplx t1 = side_tangent(s01, v0, v1);
    cplx t2 = side_tangent(sm0, v0, vm);
    double c = std::clamp(t1.real() * t2.real() + t1.imag() * t2.imag(), -1.0, 1.0);
    return std::acos(c);
}

} // namespace

FundamentalDomain::FundamentalDomain(int genus) : genus_(genus) {
    if (genus < 2) throw config_error("genus must be >= 2");
    const int n = 4 * genus;
    const double target = 2.0 * kPi / n;

    // interior angle decreases monotonically in the vertex radius
    double lo = 0.05, hi = 0.999;
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        (interior_angle(n, mid) > target ? lo : hi) = mid;
    }
    vertex_radius_ = 0.5 * (lo + hi);

    vertices_.reserve(n);
    for (int k = 0; k < n; ++k)
        vertices_.push_back(DiskPoint(vertex_radius_ * std::polar(1.0, 2.0 * kPi * k / n)));
    sides_.reserve(n);
    for (int k = 0; k < n; ++k)
        sides_.push_back(side_through(vertices_[k].z(), vertices_[(k + 1) % n].z()));

    // boundary word prod [a_i, b_i] read counterclockwise from vertex 0
    const Word boundary = relator(genus);
    std::vector<int> partner(n, -1);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            if (j != k && boundary[j] == boundary[k].inverse()) partner[k] = j;

    // pairing isometry for side k: translation to the neighbor center across
    // side k, composed with the rotation matching side partner[k] endpoints
    pairings_.resize(n);
    for (int k = 0; k < n; ++k) {
        const SideGeodesic& s = sides_[k];
        cplx foot = s.center * (1.0 - s.radius / std::abs(s.center));
        double d = distance(DiskPoint(), DiskPoint(foot));
        double phi = std::arg(s.center);
        Isometry trans = Isometry::translation(phi, 2.0 * d);
        Isometry trans_inv = trans.inverse();

        const int pk = partner[k];
        cplx vp0 = vertices_[pk].z();
        cplx vp1 = vertices_[(pk + 1) % n].z();
        cplx vk0 = vertices_[k].z();
        cplx vk1 = vertices_[(k + 1) % n].z();

        Isometry gamma;
        bool ok = false;
        // orientation-preserving pairing reverses the side, but solve both
        // matchings and keep the one that fits
        for (auto [src, dst_a, dst_b] : {std::tuple{vp0, vk1, vk0}, std::tuple{vp0, vk0, vk1}}) {
            cplx u = apply(trans_inv, DiskPoint(dst_a)).z();
            double t = std::arg(u) - std::arg(src);
            Isometry cand = compose(trans, Isometry::rotation(t));
            cplx img0 = apply(cand, DiskPoint(src)).z();
            cplx img1 = apply(cand, DiskPoint(src == vp0 ? vp1 : vp0)).z();
            if (std::abs(img0 - dst_a) < 1e-8 && std::abs(img1 - dst_b) < 1e-8) {
                gamma = cand;
                ok = true;
                break;
            }
        }
        if (!ok) throw range_error("side pairing construction failed");
        pairings_[k].partner = pk;
        pairings_[k].gamma = gamma;
    }

    // Deck generators in terms of the pairing maps.  The deck move across a
    // side is not the side's own boundary label: within the block of four
    // sides carrying a_i b_i A_i B_i, the commutator gluing gives
    // deck(a_i) = gamma of the a_i side and deck(b_i) = inverse gamma of the
    // b_i side, which makes prod [a_i, b_i] collapse.
    gen_.assign(2 * genus + 1, Isometry::identity());
    gen_inv_.assign(2 * genus + 1, Isometry::identity());
    for (int i = 1; i <= genus; ++i) {
        int blk = 4 * (i - 1);
        gen_[2 * i - 1] = pairings_[blk].gamma;                 // a_i
        gen_[2 * i] = pairings_[blk + 1].gamma.inverse();       // b_i
        gen_inv_[2 * i - 1] = gen_[2 * i - 1].inverse();
        gen_inv_[2 * i] = gen_[2 * i].inverse();
        pairings_[blk].letter = Letter{2 * i - 1, 1};      // a_i
        pairings_[blk + 1].letter = Letter{2 * i, -1};     // B_i
        pairings_[blk + 2].letter = Letter{2 * i - 1, -1}; // A_i
        pairings_[blk + 3].letter = Letter{2 * i, 1};      // b_i
    }

    if (!matrix_of(boundary).is_identity(1e-8))
        throw range_error("relator does not collapse to +-identity");
}

const Isometry& FundamentalDomain::generator(const Letter& l) const {
    return l.sign > 0 ? gen_[l.index] : gen_inv_[l.index];
}

Isometry FundamentalDomain::matrix_of(const Word& w) const {
    Isometry out = Isometry::identity();
    for (const Letter& l : w) out = compose(out, generator(l));
    return out;
}

int FundamentalDomain::locate(const DiskPoint& p, double tol) const {
    for (int k = 0; k < num_sides(); ++k) {
        double dist2 = std::norm(p.z() - sides_[k].center);
        if (sides_[k].radius * sides_[k].radius - dist2 > tol) return k;
    }
    return -1;
}

std::pair<DiskPoint, Word> FundamentalDomain::normalize(const DiskPoint& p) const {
    DiskPoint cur = p;
    Word w;
    for (int iter = 0; iter < 10000; ++iter) {
        int k = locate(cur);
        if (k < 0) return {cur, w};
        cur = apply(pairings_[k].gamma.inverse(), cur);
        w.push_back(pairings_[k].letter);
    }
    throw divergence_error("normalize exceeded the crossing cap");
}

double mc_domain_area(const FundamentalDomain& dom, int n_samples, std::uint64_t seed,
                      bool parallel) {
    const double rho = dom.vertex_radius();
    const double box = 2.0 * rho;
    std::vector<double> vals(n_samples, 0.0);
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < n_samples; ++i) {
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(i) + 1));
        std::uniform_real_distribution<double> coord(-rho, rho);
        double x = coord(rng), y = coord(rng);
        if (x * x + y * y >= 1.0 - 1e-9) continue;
        DiskPoint p(x, y);
        if (dom.contains(p)) vals[i] = area_density(p);
    }
    double sum = 0.0; // ordered fold keeps the result thread-count independent
    for (double v : vals) sum += v;
    return box * box * sum / n_samples;
}

nlohmann::json to_json(const Isometry& m) {
    return nlohmann::json{m.m[0], m.m[1], m.m[2], m.m[3]};
}

nlohmann::json FundamentalDomain::to_json() const {
    nlohmann::json j;
    j["genus"] = genus_;
    j["vertex_radius"] = vertex_radius_;
    nlohmann::json verts = nlohmann::json::array();
    for (const auto& v : vertices_) verts.push_back({v.x, v.y});
    j["vertices"] = verts;
    nlohmann::json prs = nlohmann::json::array();
    for (const auto& pr : pairings_) {
        prs.push_back({{"partner", pr.partner},
                       {"letter", letter_token(pr.letter)},
                       {"matrix", hamlab::to_json(pr.gamma)}});
    }
    j["pairings"] = prs;
    return j;
}

} // namespace hamlab
