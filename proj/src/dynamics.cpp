#include "hamlab/dynamics.hpp"

#include "hamlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace hamlab {

using cplx = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::uint64_t kMeanSeed = 0x48616d4c61624d43ull;
constexpr int kMeanSamples = 100000;

// C-infinity compactly supported radial profile, profile(0) = 1
double bump_profile(double s) {
    if (s * s >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

double bump_profile_deriv(double s) {
    if (s * s >= 1.0) return 0.0;
    double u = 1.0 - s * s;
    return bump_profile(s) * (-2.0 * s / (u * u));
}

cplx cayley_to_uhp(cplx z) { return cplx(0, 1) * (z + 1.0) / (1.0 - z); }

// deck transformations given by products of up to three side pairings,
// deduplicated modulo sign
std::vector<Isometry> translate_ball(const FundamentalDomain& dom) {
    std::vector<Isometry> out{Isometry::identity()};
    auto matches = [](const Isometry& a, const Isometry& b) {
        double dp = 0.0, dm = 0.0;
        for (int i = 0; i < 4; ++i) {
            dp = std::max(dp, std::abs(a.m[i] - b.m[i]));
            dm = std::max(dm, std::abs(a.m[i] + b.m[i]));
        }
        return std::min(dp, dm) < 1e-9;
    };
    auto push = [&](const Isometry& m) {
        for (const Isometry& e : out)
            if (matches(e, m)) return;
        out.push_back(m);
    };
    size_t level_begin = 0;
    for (int depth = 0; depth < 3; ++depth) {
        size_t level_end = out.size();
        for (size_t i = level_begin; i < level_end; ++i)
            for (const SidePairing& pr : dom.pairings()) push(compose(out[i], pr.gamma));
        level_begin = level_end;
    }
    return out;
}

double circumradius(const FundamentalDomain& dom) {
    return distance(DiskPoint(), dom.vertices()[0]);
}

// fixed points of a hyperbolic SL(2,R) matrix on the real axis
std::pair<double, double> axis_endpoints(const Isometry& m) {
    double a = m.m[0], b = m.m[1], c = m.m[2], d = m.m[3];
    double tr = a + d;
    if (tr * tr <= 4.0 + 1e-12) throw range_error("collar core is not a hyperbolic element");
    if (std::abs(c) < 1e-12) {
        // axis is a vertical line through the finite fixed point
        double x0 = b / (d - a);
        return {x0, std::numeric_limits<double>::infinity()};
    }
    double disc = std::sqrt(tr * tr - 4.0);
    double w1 = ((a - d) + disc) / (2.0 * c);
    double w2 = ((a - d) - disc) / (2.0 * c);
    return {w1, w2};
}

// isometry sending the geodesic with the given real endpoints to the
// imaginary axis
Isometry axis_normalizer(double w1, double w2) {
    Isometry n;
    if (std::isinf(w2)) {
        n.m = {1.0, -w1, 0.0, 1.0};
        return n;
    }
    if (w1 > w2) std::swap(w1, w2); // keep det positive
    n.m = {1.0, -w2, 1.0, -w1};
    n.renormalize();
    return n;
}

// signed hyperbolic coordinate transverse to the normalized axis; its
// absolute value is the distance to the axis
double axis_coordinate(const Isometry& to_axis, const DiskPoint& p) {
    cplx w = cayley_to_uhp(p.z());
    cplx u = (to_axis.m[0] * w + to_axis.m[1]) / (to_axis.m[2] * w + to_axis.m[3]);
    return std::asinh(u.real() / u.imag());
}

double axis_distance(const Isometry& to_axis, const DiskPoint& p) {
    return std::abs(axis_coordinate(to_axis, p));
}

// Euclidean gradient of the signed axis coordinate, via the holomorphic
// derivative of the Cayley map composed with the normalizer
TangentVector axis_coordinate_gradient(const Isometry& to_axis, const DiskPoint& p) {
    cplx z = p.z();
    cplx w = cayley_to_uhp(z);
    cplx denom = to_axis.m[2] * w + to_axis.m[3];
    cplx u = (to_axis.m[0] * w + to_axis.m[1]) / denom;
    cplx one_minus_z = 1.0 - z;
    cplx du_dz = (cplx(0, 2) / (one_minus_z * one_minus_z)) / (denom * denom);
    double xi = u.real(), eta = u.imag();
    // Cauchy-Riemann: d(xi)/dx = Re du_dz, d(eta)/dx = Im du_dz,
    //                 d(xi)/dy = -Im du_dz, d(eta)/dy = Re du_dz
    double t = xi / eta;
    double tx = (du_dz.real() * eta - xi * du_dz.imag()) / (eta * eta);
    double ty = (-du_dz.imag() * eta - xi * du_dz.real()) / (eta * eta);
    double scale = 1.0 / std::sqrt(1.0 + t * t); // d asinh(t)/dt
    return {scale * tx, scale * ty};
}

// Euclidean gradient of the hyperbolic distance d(p, c) in p, via
// d = acosh(1 + Q) with Q = 2|p-c|^2 / ((1-|p|^2)(1-|c|^2))
TangentVector distance_gradient(const DiskPoint& p, const DiskPoint& c) {
    double nx = p.x - c.x, ny = p.y - c.y;
    double n2 = nx * nx + ny * ny;
    double dp = 1.0 - p.norm2();
    double dc = 1.0 - c.norm2();
    double q = 2.0 * n2 / (dp * dc);
    double denom = std::sqrt(q * (q + 2.0));
    if (denom < 1e-14) return {0.0, 0.0}; // at the center; callers multiply by profile' -> 0
    double qx = (4.0 * nx * dp + 4.0 * p.x * n2) / (dp * dp * dc);
    double qy = (4.0 * ny * dp + 4.0 * p.y * n2) / (dp * dp * dc);
    return {qx / denom, qy / denom};
}

} // namespace

DomainSampler::DomainSampler(const FundamentalDomain& dom)
    : dom_(&dom), box_radius_(dom.vertex_radius()) {
    double s = 1.0 - box_radius_ * box_radius_;
    density_max_ = 4.0 / (s * s);
}

DiskPoint DomainSampler::sample(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(-box_radius_, box_radius_);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int tries = 0; tries < 100000; ++tries) {
        double x = coord(rng), y = coord(rng);
        if (x * x + y * y >= 1.0 - 1e-9) continue;
        DiskPoint p(x, y);
        if (!dom_->contains(p)) continue;
        if (unit(rng) * density_max_ <= area_density(p)) return p;
    }
    throw divergence_error("domain rejection sampler failed to accept");
}

ScalarField::ScalarField(const FundamentalDomain& dom, std::vector<FieldTerm> terms)
    : dom_(&dom), terms_(std::move(terms)) {
    const double reach = circumradius(dom);
    const auto ball = translate_ball(dom);
    const DiskPoint origin;

    for (const FieldTerm& term : terms_) {
        if (const auto* bump = std::get_if<BumpTerm>(&term)) {
            if (bump->radius <= 0.0) throw config_error("bump radius must be positive");
            for (const Isometry& g : ball) {
                DiskPoint c = apply(g, bump->center);
                if (distance(origin, c) <= reach + bump->radius)
                    bump_lifts_.push_back({c, bump->radius, bump->amplitude});
            }
        } else {
            const auto& collar = std::get<CollarTerm>(term);
            if (collar.width <= 0.0) throw config_error("collar width must be positive");
            Isometry core = dom.matrix_of(collar.core);
            std::map<std::pair<long long, long long>, bool> seen;
            for (const Isometry& g : ball) {
                Isometry conj = compose(compose(g, core), g.inverse());
                auto [w1, w2] = axis_endpoints(conj);
                // dedup by quantized endpoint pair
                auto key = std::minmax(w1, std::isinf(w2) ? 1e18 : w2);
                auto qk = std::make_pair(static_cast<long long>(std::llround(key.first * 1e9)),
                                         static_cast<long long>(std::llround(key.second * 1e9)));
                if (seen.count(qk)) continue;
                seen[qk] = true;
                Isometry n = axis_normalizer(w1, w2);
                if (axis_distance(n, origin) <= reach + collar.width)
                    collar_lifts_.push_back({n, collar.width, collar.amplitude});
            }
        }
    }

    // zero-mean normalization and sup-norm estimate over a fixed sample
    DomainSampler sampler(dom);
    std::mt19937_64 seeds(kMeanSeed);
    double sum = 0.0;
    std::vector<double> vals(kMeanSamples);
    for (int i = 0; i < kMeanSamples; ++i) {
        vals[i] = raw_value(sampler.sample(seeds()));
        sum += vals[i];
    }
    mean_offset_ = sum / kMeanSamples;
    sup_norm_ = 0.0;
    for (double v : vals) sup_norm_ = std::max(sup_norm_, std::abs(v - mean_offset_));
}

double ScalarField::raw_value(const DiskPoint& p) const {
    double out = 0.0;
    for (const BumpLift& b : bump_lifts_) {
        double d = distance(p, b.center);
        if (d < b.radius) out += b.amplitude * bump_profile(d / b.radius);
    }
    for (const CollarLift& c : collar_lifts_) {
        double d = axis_distance(c.to_axis, p);
        if (d < c.width) out += c.amplitude * bump_profile(d / c.width);
    }
    return out;
}

double ScalarField::value(const DiskPoint& p) const { return raw_value(p) - mean_offset_; }

TangentVector ScalarField::euclidean_gradient(const DiskPoint& p) const {
    double gx = 0.0, gy = 0.0;
    for (const BumpLift& b : bump_lifts_) {
        double d = distance(p, b.center);
        if (d >= b.radius) continue;
        double w = b.amplitude * bump_profile_deriv(d / b.radius) / b.radius;
        TangentVector dd = distance_gradient(p, b.center);
        gx += w * dd.vx;
        gy += w * dd.vy;
    }
    for (const CollarLift& c : collar_lifts_) {
        double s = axis_coordinate(c.to_axis, p);
        if (std::abs(s) >= c.width) continue;
        double w = c.amplitude * bump_profile_deriv(s / c.width) / c.width;
        TangentVector ds = axis_coordinate_gradient(c.to_axis, p);
        gx += w * ds.vx;
        gy += w * ds.vy;
    }
    return {gx, gy};
}

TangentVector ScalarField::hamiltonian_field(const DiskPoint& p) const {
    TangentVector g = euclidean_gradient(p);
    double lam2 = area_density(p);
    return {g.vy / lam2, -g.vx / lam2};
}

double ScalarField::gradient_norm(const DiskPoint& p) const {
    TangentVector g = euclidean_gradient(p);
    return std::hypot(g.vx, g.vy) / std::sqrt(area_density(p));
}

nlohmann::json ScalarField::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const FieldTerm& term : terms_) {
        if (const auto* bump = std::get_if<BumpTerm>(&term)) {
            terms.push_back({{"kind", "bump"},
                             {"center", {bump->center.x, bump->center.y}},
                             {"radius", bump->radius},
                             {"amplitude", bump->amplitude}});
        } else {
            const auto& collar = std::get<CollarTerm>(term);
            terms.push_back({{"kind", "collar"},
                             {"core", format_word(collar.core)},
                             {"width", collar.width},
                             {"amplitude", collar.amplitude}});
        }
    }
    return nlohmann::json{{"terms", terms}};
}

ScalarField ScalarField::from_json(const FundamentalDomain& dom, const nlohmann::json& j) {
    if (!j.contains("terms") || !j["terms"].is_array())
        throw config_error("hamiltonian: missing 'terms' array");
    std::vector<FieldTerm> terms;
    int idx = 0;
    for (const auto& t : j["terms"]) {
        std::string path = "hamiltonian.terms[" + std::to_string(idx++) + "]";
        std::string kind = t.value("kind", "");
        if (kind == "bump") {
            if (!t.contains("center") || !t["center"].is_array() || t["center"].size() != 2)
                throw config_error(path + ".center: expected [x, y]");
            BumpTerm b;
            b.center = DiskPoint(t["center"][0].get<double>(), t["center"][1].get<double>());
            b.radius = t.value("radius", 0.0);
            b.amplitude = t.value("amplitude", 0.0);
            if (b.radius <= 0.0) throw config_error(path + ".radius: must be positive");
            terms.push_back(b);
        } else if (kind == "collar") {
            CollarTerm c;
            c.core = parse_word(t.value("core", ""));
            c.width = t.value("width", 0.0);
            c.amplitude = t.value("amplitude", 0.0);
            if (c.core.empty()) throw config_error(path + ".core: must be a non-empty word");
            if (c.width <= 0.0) throw config_error(path + ".width: must be positive");
            terms.push_back(c);
        } else {
            throw config_error(path + ".kind: expected 'bump' or 'collar'");
        }
    }
    return ScalarField(dom, std::move(terms));
}

namespace {

struct LiftState {
    DiskPoint p;  // domain representative
    Word deck;    // accumulated crossings
};

// one classical 4th-order step of dp/dt = X_H(p)
DiskPoint rk4_step(const ScalarField& H, const DiskPoint& p, double dt) {
    auto eval = [&H](const DiskPoint& q) { return H.hamiltonian_field(q); };
    TangentVector k1 = eval(p);
    TangentVector k2 = eval(DiskPoint(p.x + 0.5 * dt * k1.vx, p.y + 0.5 * dt * k1.vy));
    TangentVector k3 = eval(DiskPoint(p.x + 0.5 * dt * k2.vx, p.y + 0.5 * dt * k2.vy));
    TangentVector k4 = eval(DiskPoint(p.x + dt * k3.vx, p.y + dt * k3.vy));
    return DiskPoint(p.x + dt / 6.0 * (k1.vx + 2.0 * k2.vx + 2.0 * k3.vx + k4.vx),
                     p.y + dt / 6.0 * (k1.vy + 2.0 * k2.vy + 2.0 * k3.vy + k4.vy));
}

} // namespace

Trajectory integrate_flow(const ScalarField& H, const DiskPoint& x0, double T, double dt,
                          int record_stride) {
    if (dt <= 0.0 || T < 0.0) throw config_error("integrate_flow needs dt > 0 and T >= 0");
    const FundamentalDomain& dom = H.domain();
    int n_steps = std::max(1, static_cast<int>(std::llround(T / dt)));
    double step = T / n_steps;

    Trajectory traj;
    DiskPoint cur = x0;
    double h0 = H.value(cur);
    if (record_stride > 0) traj.samples.push_back({0.0, cur, Letter{}, false});

    for (int i = 0; i < n_steps; ++i) {
        cur = rk4_step(H, cur, step);
        double t = (i + 1) * step;
        if (!dom.contains(cur)) {
            auto [folded, w] = dom.normalize(cur);
            cur = folded;
            for (const Letter& l : w) {
                traj.deck.push_back(l);
                if (record_stride > 0) traj.samples.push_back({t, cur, l, true});
            }
        } else if (record_stride > 0 && (i + 1) % record_stride == 0) {
            traj.samples.push_back({t, cur, Letter{}, false});
        }
        traj.h_drift = std::max(traj.h_drift, std::abs(H.value(cur) - h0));
    }
    traj.endpoint = cur;
    return traj;
}

LoopClass loop_class(const CompositeFlow& flow, const DiskPoint& x, int p, double dt) {
    Word deck;
    DiskPoint cur = x;
    for (int rep = 0; rep < p; ++rep) {
        for (const FlowSegment& seg : flow) {
            Trajectory t = integrate_flow(*seg.field, cur, seg.duration, dt, 0);
            deck = concat(deck, t.deck);
            cur = t.endpoint;
        }
    }
    return {free_reduce(deck)};
}

LoopClass loop_class(const ScalarField& H, const DiskPoint& x, int p, double dt) {
    CompositeFlow flow{{&H, 1.0}};
    return loop_class(flow, x, p, dt);
}

LoopClass level_loop(const ScalarField& H, const DiskPoint& x, const LevelLoopOptions& opt) {
    const FundamentalDomain& dom = H.domain();
    if (H.gradient_norm(x) < opt.grad_threshold)
        throw regularity_error("gradient below regularity threshold");

    auto unit_field = [&H](const DiskPoint& p) {
        TangentVector v = H.hamiltonian_field(p);
        double lam = std::sqrt(area_density(p));
        double speed = lam * std::hypot(v.vx, v.vy);
        if (speed < 1e-14) throw regularity_error("level trace hit a critical point");
        return TangentVector{v.vx / speed, v.vy / speed};
    };
    auto step_from = [&](DiskPoint p, double ds) {
        TangentVector k1 = unit_field(p);
        TangentVector k2 = unit_field(DiskPoint(p.x + 0.5 * ds * k1.vx, p.y + 0.5 * ds * k1.vy));
        TangentVector k3 = unit_field(DiskPoint(p.x + 0.5 * ds * k2.vx, p.y + 0.5 * ds * k2.vy));
        TangentVector k4 = unit_field(DiskPoint(p.x + ds * k3.vx, p.y + ds * k3.vy));
        return DiskPoint(p.x + ds / 6.0 * (k1.vx + 2.0 * k2.vx + 2.0 * k3.vx + k4.vx),
                         p.y + ds / 6.0 * (k1.vy + 2.0 * k2.vy + 2.0 * k3.vy + k4.vy));
    };

    const TangentVector dir0 = unit_field(x);
    const double escape_radius = std::max(50.0 * opt.return_eps, 5.0 * opt.arc_step);
    const double close_radius = 2.0 * opt.arc_step;

    DiskPoint cur = x;
    Word deck;
    bool escaped = false;
    double d_prev = 0.0;
    double length = 0.0;

    auto fold = [&](DiskPoint p) {
        if (dom.contains(p)) return p;
        auto [folded, w] = dom.normalize(p);
        deck = concat(deck, w);
        return folded;
    };

    while (length < opt.length_cap) {
        DiskPoint next = fold(step_from(cur, opt.arc_step));
        length += opt.arc_step;
        double d = distance(next, x);
        if (!escaped) {
            if (d > escape_radius) escaped = true;
        } else if (d_prev < close_radius && d > d_prev) {
            // passed a local closest approach; refine from the previous point
            double fine = opt.arc_step / 50.0;
            DiskPoint probe = cur;
            double best = distance(probe, x);
            for (int j = 0; j < 200; ++j) {
                probe = fold(step_from(probe, fine));
                best = std::min(best, distance(probe, x));
            }
            if (best < opt.return_eps) {
                TangentVector dir = unit_field(next);
                // the trace may close only after several windings; report the
                // primitive class of the level-set component
                if (dir.vx * dir0.vx + dir.vy * dir0.vy > 0.0)
                    return {primitive_root(free_reduce(deck))};
            }
        }
        d_prev = d;
        cur = next;
    }
    throw nonclosure_error("level curve did not close within the length cap");
}

namespace {

int insertion_remainder(const Word& w, const Word& g_pow_inv, int genus) {
    int best = std::numeric_limits<int>::max();
    for (size_t j = 0; j <= w.size(); ++j) {
        Word cand(w.begin(), w.begin() + j);
        cand.insert(cand.end(), g_pow_inv.begin(), g_pow_inv.end());
        cand.insert(cand.end(), w.begin() + j, w.end());
        best = std::min(best, word_length(cand, genus));
        if (best == 0) break;
    }
    return best;
}

} // namespace

Decomposition decompose_trajectory(const ScalarField& H, const DiskPoint& x, int p, double dt,
                                   const LevelLoopOptions& opt) {
    const int genus = H.domain().genus();
    Word w = dehn_reduce(loop_class(H, x, p, dt).word, genus);
    Word g = dehn_reduce(level_loop(H, x, opt).word, genus);
    if (g.empty()) return {0, static_cast<int>(w.size())};

    // powers of g grow by its cyclic core, so window k by the core length
    size_t core = std::max<size_t>(1, cyclic_reduce(g).first.size());
    int k_max = static_cast<int>(w.size() / core) + 2;
    Decomposition best{0, static_cast<int>(w.size())};
    for (int k = -k_max; k <= k_max; ++k) {
        Word ins = power(inverse(g), k); // g^-k
        int r = (k == 0) ? static_cast<int>(w.size()) : insertion_remainder(w, ins, genus);
        if (r < best.remainder_length ||
            (r == best.remainder_length && std::abs(k) < std::abs(best.k))) {
            best = {k, r};
        }
    }
    return best;
}

L1Estimate l1_length(const ScalarField& H, double T, int n_samples, std::uint64_t seed) {
    if (T <= 0.0) throw config_error("l1_length needs T > 0");
    const double area = 4.0 * kPi * (H.domain().genus() - 1);
    DomainSampler sampler(H.domain());
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        DiskPoint pt = sampler.sample(seed + 0x9e3779b97f4a7c15ull * (i + 1));
        TangentVector v = H.hamiltonian_field(pt);
        double speed = std::sqrt(area_density(pt)) * std::hypot(v.vx, v.vy);
        sum += speed;
        sum2 += speed * speed;
    }
    double mean = sum / n_samples;
    double var = std::max(0.0, sum2 / n_samples - mean * mean);
    L1Estimate out;
    out.value = T * area * mean;
    out.std_error = T * area * std::sqrt(var / n_samples);
    return out;
}

} // namespace hamlab
