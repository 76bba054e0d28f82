#include "hamlab/dynamics.hpp"
#include "hamlab/errors.hpp"
#include "hamlab/presets.hpp"

#include <cmath>
#include <random>

#include <doctest.h>

using namespace hamlab;

namespace {

const FundamentalDomain& octagon() {
    static FundamentalDomain dom(2);
    return dom;
}

DiskPoint active_point(const ScalarField& H, std::uint64_t seed0, double min_grad = 0.5) {
    DomainSampler s(H.domain());
    for (std::uint64_t i = seed0; i < seed0 + 100000; ++i) {
        DiskPoint p = s.sample(i);
        if (H.gradient_norm(p) > min_grad) return p;
    }
    throw divergence_error("no active point found");
}

} // namespace

TEST_CASE("bump field value at the center and outside the support") {
    ScalarField H(octagon(), contractible_bump_terms(1.5, 0.55));
    // profile(0) = 1, so the raw values differ by the full amplitude
    double inside = H.value(DiskPoint());
    double outside = H.value(DiskPoint(0.6, 0.0)); // hyperbolic distance ~1.4 > 0.55
    CHECK(inside - outside == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(H.sup_norm() > 0.0);
    // zero-mean normalization over the shipped sample
    CHECK(std::abs(H.mean_offset()) < 1.5);
}

TEST_CASE("fields are deck-invariant where their lift sets reach") {
    ScalarField bump(octagon(), contractible_bump_terms(1.0, 0.7));
    ScalarField collar(octagon(), collar_terms("a1"));
    // evaluate at points of the circumscribed disk (partly outside the
    // domain) and compare with the folded domain representative
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-0.83, 0.83);
    int tested = 0;
    while (tested < 100) {
        double x = u(rng), y = u(rng);
        if (x * x + y * y > 0.83 * 0.83) continue;
        DiskPoint p(x, y);
        if (octagon().contains(p)) continue; // folding would be the identity
        ++tested;
        DiskPoint q = octagon().normalize(p).first;
        CHECK(bump.value(q) == doctest::Approx(bump.value(p)).epsilon(1e-9));
        CHECK(collar.value(q) == doctest::Approx(collar.value(p)).epsilon(1e-9));
    }
}

TEST_CASE("gradient matches a finite-difference oracle") {
    std::vector<FieldTerm> mix = collar_terms("a1");
    for (const FieldTerm& t : contractible_bump_terms(1.0, 0.55)) mix.push_back(t);
    ScalarField H(octagon(), mix);
    DomainSampler s(octagon());
    const double h = 1e-6;
    for (std::uint64_t i = 0; i < 200; ++i) {
        DiskPoint p = s.sample(i);
        TangentVector g = H.euclidean_gradient(p);
        double fx = (H.value(DiskPoint(p.x + h, p.y)) - H.value(DiskPoint(p.x - h, p.y))) / (2 * h);
        double fy = (H.value(DiskPoint(p.x, p.y + h)) - H.value(DiskPoint(p.x, p.y - h))) / (2 * h);
        CHECK(g.vx == doctest::Approx(fx).epsilon(1e-4));
        CHECK(std::abs(g.vx - fx) <= 1e-6);
        CHECK(std::abs(g.vy - fy) <= 1e-6);
    }
}

TEST_CASE("hamiltonian field is the symplectic gradient") {
    ScalarField H(octagon(), collar_terms("a1"));
    DomainSampler s(octagon());
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::uint64_t i = 0; i < 100; ++i) {
        DiskPoint p = s.sample(i);
        TangentVector g = H.euclidean_gradient(p);
        TangentVector x = H.hamiltonian_field(p);
        // dH(X_H) = 0
        CHECK(std::abs(g.vx * x.vx + g.vy * x.vy) <= 1e-12);
        // omega(X_H, v) = dH(v) with omega = lambda^2 dx ^ dy
        double vx = u(rng), vy = u(rng);
        double omega = area_density(p) * (x.vx * vy - x.vy * vx);
        CHECK(omega == doctest::Approx(g.vx * vx + g.vy * vy).epsilon(1e-9));
        // gradient_norm is the hyperbolic norm
        CHECK(H.gradient_norm(p) ==
              doctest::Approx(std::hypot(g.vx, g.vy) / std::sqrt(area_density(p))).epsilon(1e-12));
    }
}

TEST_CASE("zero field leaves points fixed") {
    ScalarField H(octagon(), {});
    Trajectory t = integrate_flow(H, DiskPoint(0.2, 0.1), 1.0, 1e-2);
    CHECK(t.deck.empty());
    CHECK(t.endpoint.x == doctest::Approx(0.2));
    CHECK(t.endpoint.y == doctest::Approx(0.1));
    CHECK(t.h_drift == 0.0);
    CHECK(t.samples.size() == 101);
}

TEST_CASE("flow conserves energy at 4th order") {
    ScalarField H(octagon(), collar_terms("a1"));
    DiskPoint x0 = active_point(H, 1000, 1.0);
    Trajectory coarse = integrate_flow(H, x0, 1.0, 2e-3, 0);
    Trajectory fine = integrate_flow(H, x0, 1.0, 1e-3, 0);
    CHECK(coarse.h_drift <= 1e-6);
    CHECK(coarse.h_drift / fine.h_drift >= 8.0);
}

TEST_CASE("flow lift is consistent under restart") {
    ScalarField H(octagon(), collar_terms("a1"));
    DiskPoint x0 = active_point(H, 2000, 1.0);
    Trajectory whole = integrate_flow(H, x0, 2.0, 1e-3, 0);
    Trajectory first = integrate_flow(H, x0, 1.0, 1e-3, 0);
    Trajectory second = integrate_flow(H, first.endpoint, 1.0, 1e-3, 0);
    // lifted endpoints agree: deck(whole) * end == deck(first) * deck(second) * end
    DiskPoint a = apply(octagon().matrix_of(whole.deck), whole.endpoint);
    DiskPoint b = apply(octagon().matrix_of(concat(first.deck, second.deck)), second.endpoint);
    CHECK(distance(a, b) <= 1e-6);
}

TEST_CASE("flow input validation") {
    ScalarField H(octagon(), {});
    CHECK_THROWS_AS(integrate_flow(H, DiskPoint(), 1.0, 0.0), config_error);
    CHECK_THROWS_AS(integrate_flow(H, DiskPoint(), -1.0, 1e-2), config_error);
}

TEST_CASE("contractible bump flow has trivial loop classes") {
    ScalarField H(octagon(), contractible_bump_terms());
    DomainSampler s(octagon());
    for (std::uint64_t i = 0; i < 10; ++i) {
        CHECK(loop_class(H, s.sample(i), 2, 1e-2).word.empty());
    }
}

TEST_CASE("collar flow winds around its core") {
    ScalarField H(octagon(), collar_terms("a1"));
    DiskPoint x0 = active_point(H, 3000, 1.0);
    Word w = loop_class(H, x0, 4, 1e-2).word;
    CHECK_FALSE(w.empty());
    // the class is conjugate to a power of the core: its primitive cyclic
    // core must be a1 or A1
    Word core = cyclic_reduce(primitive_root(dehn_reduce(w, 2))).first;
    CHECK(core.size() == 1);
    CHECK(core[0].index == 1);
}

TEST_CASE("loop class is stable under dt halving") {
    ScalarField H(octagon(), collar_terms("a1"));
    DiskPoint x0 = active_point(H, 4000, 1.0);
    Word w1 = dehn_reduce(loop_class(H, x0, 2, 2e-3).word, 2);
    Word w2 = dehn_reduce(loop_class(H, x0, 2, 1e-3).word, 2);
    CHECK(format_word(w1) == format_word(w2));
}

TEST_CASE("level loop returns the primitive class of the component") {
    ScalarField H(octagon(), collar_terms("a1"));
    for (std::uint64_t i = 0; i < 5; ++i) {
        DiskPoint x0 = active_point(H, 5000 + 97 * i, 1.0);
        Word g = level_loop(H, x0).word;
        Word core = cyclic_reduce(g).first;
        CHECK(core.size() == 1);   // conjugate of a single core letter
        CHECK(core[0].index == 1);
        CHECK(format_word(primitive_root(g)) == format_word(g));
    }
}

TEST_CASE("level loop rejects points with tiny gradient") {
    ScalarField H(octagon(), contractible_bump_terms());
    // between the bump support and the nearest deck translate the gradient vanishes
    CHECK_THROWS_AS(level_loop(H, DiskPoint(0.45, 0.0)), regularity_error);
}

TEST_CASE("decomposition cancels the winding at regular points") {
    ScalarField H(octagon(), collar_terms("a1"));
    for (std::uint64_t i = 0; i < 5; ++i) {
        DiskPoint x0 = active_point(H, 6000 + 131 * i, 1.0);
        Decomposition d = decompose_trajectory(H, x0, 4, 1e-2);
        CHECK(d.remainder_length <= 1);
    }
}

TEST_CASE("l1 length scales linearly in time and amplitude") {
    ScalarField H1(octagon(), collar_terms("a1", 1.0));
    ScalarField H2(octagon(), collar_terms("a1", 2.0));
    L1Estimate a = l1_length(H1, 1.0, 4000, 9);
    L1Estimate b = l1_length(H1, 2.0, 4000, 9);
    L1Estimate c = l1_length(H2, 1.0, 4000, 9);
    CHECK(a.value > 0.0);
    CHECK(b.value == doctest::Approx(2.0 * a.value).epsilon(1e-12));
    CHECK(c.value == doctest::Approx(2.0 * a.value).epsilon(1e-9));
    CHECK(a.std_error > 0.0);
    CHECK_THROWS_AS(l1_length(H1, 0.0, 100, 9), config_error);
}

TEST_CASE("field JSON round-trips") {
    std::vector<FieldTerm> mix = collar_terms("a1", 2.0, 0.85);
    mix.push_back(BumpTerm{DiskPoint(0.2, -0.1), 0.4, 0.5});
    ScalarField H(octagon(), mix);
    nlohmann::json j = H.to_json();
    ScalarField back = ScalarField::from_json(octagon(), j);
    CHECK(back.to_json() == j);
    CHECK(back.value(DiskPoint(0.1, 0.2)) == H.value(DiskPoint(0.1, 0.2)));
}

TEST_CASE("field JSON validation reports field paths") {
    CHECK_THROWS_WITH_AS(ScalarField::from_json(octagon(), nlohmann::json::object()),
                         "hamiltonian: missing 'terms' array", config_error);
    nlohmann::json bad = {{"terms", {{{"kind", "bump"}, {"center", {0.0, 0.0}}, {"radius", -1.0}}}}};
    CHECK_THROWS_WITH_AS(ScalarField::from_json(octagon(), bad),
                         "hamiltonian.terms[0].radius: must be positive", config_error);
    nlohmann::json unknown = {{"terms", {{{"kind", "wedge"}}}}};
    CHECK_THROWS_WITH_AS(ScalarField::from_json(octagon(), unknown),
                         "hamiltonian.terms[0].kind: expected 'bump' or 'collar'", config_error);
}

TEST_CASE("collar core must be hyperbolic") {
    CHECK_THROWS_AS(ScalarField(octagon(), {CollarTerm{Word{}, 0.5, 1.0}}), range_error);
}

TEST_CASE("domain sampler is deterministic and in-domain") {
    DomainSampler s(octagon());
    for (std::uint64_t i = 0; i < 100; ++i) {
        DiskPoint p = s.sample(i);
        CHECK(octagon().contains(p));
    }
    DiskPoint a = s.sample(123), b = s.sample(123);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
}
