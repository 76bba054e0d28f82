#include "hamlab/verify.hpp"

#include "hamlab/dynamics.hpp"
#include "hamlab/errors.hpp"
#include "hamlab/geometry.hpp"
#include "hamlab/presets.hpp"
#include "hamlab/quasimorphism.hpp"
#include "hamlab/surface_group.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace hamlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

CheckResult check(const std::string& name, bool pass, double measured, double limit) {
    std::ostringstream os;
    os << "measured " << measured << " vs limit " << limit;
    return {name, pass, os.str()};
}

double matrix_mismatch(const Isometry& a, const Isometry& b) {
    double dp = 0.0, dm = 0.0;
    for (int i = 0; i < 4; ++i) {
        dp = std::max(dp, std::abs(a.m[i] - b.m[i]));
        dm = std::max(dm, std::abs(a.m[i] + b.m[i]));
    }
    return std::min(dp, dm);
}

} // namespace

bool all_pass(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

std::vector<CheckResult> verify_geometry(int genus, std::uint64_t seed, bool quick) {
    std::vector<CheckResult> out;
    FundamentalDomain dom(genus);
    std::mt19937_64 rng(seed);

    double rel_err = dom.matrix_of(relator(genus)).identity_error();
    out.push_back(check("relator collapses to +-identity", rel_err <= 1e-8, rel_err, 1e-8));

    // composition homomorphism on random word pairs; relative mismatch,
    // since entries of long products grow exponentially
    double worst = 0.0;
    for (int i = 0; i < (quick ? 20 : 200); ++i) {
        Word w1 = random_reduced_word(6, genus, rng());
        Word w2 = random_reduced_word(6, genus, rng());
        Isometry prod = compose(dom.matrix_of(w1), dom.matrix_of(w2));
        double scale = 1.0;
        for (double e : prod.m) scale = std::max(scale, std::abs(e));
        worst = std::max(worst, matrix_mismatch(dom.matrix_of(concat(w1, w2)), prod) / scale);
    }
    out.push_back(check("matrix_of is a homomorphism", worst <= 1e-9, worst, 1e-9));

    // tiling consistency: normalize returns a domain point and a valid word
    double tile_worst = 0.0;
    std::uniform_real_distribution<double> unif(-0.95, 0.95);
    int tested = 0;
    while (tested < (quick ? 100 : 1000)) {
        double x = unif(rng), y = unif(rng);
        if (x * x + y * y > 0.95 * 0.95) continue;
        ++tested;
        DiskPoint p(x, y);
        auto [q, w] = dom.normalize(p);
        if (!dom.contains(q, 1e-9)) tile_worst = std::max(tile_worst, 1.0);
        DiskPoint back = apply(dom.matrix_of(w), q);
        tile_worst = std::max(tile_worst, std::hypot(back.x - p.x, back.y - p.y));
    }
    out.push_back(check("tiling consistency (normalize round-trip)", tile_worst <= 1e-7,
                        tile_worst, 1e-7));

    // Gauss-Bonnet area
    int n = quick ? 100000 : 1000000;
    double area = mc_domain_area(dom, n, rng());
    double expect = 4.0 * kPi * (genus - 1);
    double rel = std::abs(area - expect) / expect;
    out.push_back(check("hyperbolic area = 4*pi*(g-1) within 1%", rel <= 0.01, rel, 0.01));

    return out;
}

std::vector<CheckResult> verify_group(int genus, std::uint64_t seed, bool quick) {
    std::vector<CheckResult> out;
    FundamentalDomain dom(genus);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> len(0, 20);

    int n_words = quick ? 500 : 10000;
    int disagreements = 0;
    bool dehn_ok = true;
    for (int i = 0; i < n_words; ++i) {
        Word w = free_reduce(random_reduced_word(len(rng), genus, rng()));
        Word r = dehn_reduce(w, genus);
        if (r.size() > w.size() || dehn_reduce(r, genus) != r) dehn_ok = false;
        bool alg = r.empty();
        // threshold between rounding noise on trivial products and the
        // systole gap below any nontrivial element
        bool oracle = dom.matrix_of(w).identity_error() <= 1e-4;
        if (alg != oracle) ++disagreements;
    }
    out.push_back(check("dehn_reduce idempotent and non-increasing", dehn_ok, dehn_ok ? 0 : 1, 0));
    out.push_back(check("word problem agrees with the matrix oracle", disagreements == 0,
                        disagreements, 0));

    bool subadd = true, conj = true;
    for (int i = 0; i < (quick ? 50 : 500); ++i) {
        Word w = random_reduced_word(len(rng), genus, rng());
        Word v = random_reduced_word(len(rng), genus, rng());
        Word c = random_reduced_word(len(rng) / 2, genus, rng());
        if (word_length(concat(w, v), genus) > word_length(w, genus) + word_length(v, genus))
            subadd = false;
        int lw = word_length(w, genus);
        int lc = word_length(c, genus);
        int lcwc = word_length(concat(concat(c, w), inverse(c)), genus);
        if (std::abs(lcwc - lw) > 2 * lc) conj = false;
    }
    out.push_back(check("word_length subadditive", subadd, subadd ? 0 : 1, 0));
    out.push_back(check("word_length conjugation-bounded", conj, conj ? 0 : 1, 0));

    return out;
}

std::vector<CheckResult> verify_dynamics(int genus, std::uint64_t seed, bool quick) {
    std::vector<CheckResult> out;
    FundamentalDomain dom(genus);
    ScalarField H(dom, collar_terms("a1"));
    std::mt19937_64 rng(seed);
    DomainSampler sampler(dom);

    // energy conservation at the shipped step size, probed where the field
    // actually moves the point
    DiskPoint x0;
    for (std::uint64_t i = 0;; ++i) {
        x0 = sampler.sample(rng());
        if (H.gradient_norm(x0) > 1.0) break;
        if (i > 10000) throw divergence_error("no probe point with usable gradient");
    }
    Trajectory t1 = integrate_flow(H, x0, 1.0, 1e-3, 0);
    out.push_back(check("energy drift <= 1e-6 at dt=1e-3", t1.h_drift <= 1e-6, t1.h_drift, 1e-6));
    Trajectory t2 = integrate_flow(H, x0, 1.0, 5e-4, 0);
    double ratio = t1.h_drift / std::max(t2.h_drift, 1e-300);
    out.push_back(check("drift reduces >= 10x when dt halves", ratio >= 10.0, ratio, 10.0));

    // area preservation of the time-one map via a finite-difference Jacobian
    double worst = 0.0;
    int points = quick ? 10 : 100;
    const double h = 1e-5;
    for (int i = 0; i < points; ++i) {
        DiskPoint p = sampler.sample(rng());
        auto flow_to = [&](double dx, double dy) {
            return integrate_flow(H, DiskPoint(p.x + dx, p.y + dy), 1.0, 2e-3, 0);
        };
        // compare continuous lifts so deck moves of perturbed endpoints
        // cancel; central differences keep the truncation error below the
        // tolerance where the flow map's second derivatives are large
        auto lift = [&](const Trajectory& t) {
            return apply(dom.matrix_of(t.deck), t.endpoint);
        };
        DiskPoint f0 = lift(flow_to(0, 0));
        DiskPoint fxp = lift(flow_to(h, 0)), fxm = lift(flow_to(-h, 0));
        DiskPoint fyp = lift(flow_to(0, h)), fym = lift(flow_to(0, -h));
        double j11 = (fxp.x - fxm.x) / (2 * h), j21 = (fxp.y - fxm.y) / (2 * h);
        double j12 = (fyp.x - fym.x) / (2 * h), j22 = (fyp.y - fym.y) / (2 * h);
        double jac = j11 * j22 - j12 * j21;
        double ratio_area = jac * area_density(f0) / area_density(p);
        worst = std::max(worst, std::abs(ratio_area - 1.0));
    }
    out.push_back(check("time-one map preserves area to 1e-3", worst <= 1e-3, worst, 1e-3));

    // loop-class invariance under dt halving
    bool classes_ok = true;
    for (int i = 0; i < (quick ? 2 : 5); ++i) {
        DiskPoint p;
        do p = sampler.sample(rng());
        while (H.gradient_norm(p) < 0.5);
        Word w1 = loop_class(H, p, 2, 2e-3).word;
        Word w2 = loop_class(H, p, 2, 1e-3).word;
        if (matrix_mismatch(dom.matrix_of(w1), dom.matrix_of(w2)) > 1e-6) classes_ok = false;
    }
    out.push_back(check("loop class invariant under dt halving", classes_ok, classes_ok ? 0 : 1, 0));

    return out;
}

} // namespace hamlab
