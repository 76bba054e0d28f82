// Acceptance gate: one line per criterion, nonzero exit on any failure.

#include "hamlab/polterovich.hpp"
#include "hamlab/presets.hpp"
#include "hamlab/report.hpp"
#include "hamlab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>

using namespace hamlab;
using clock_type = std::chrono::steady_clock;

namespace {

constexpr double kPi = 3.14159265358979323846;

int g_failures = 0;

void report(int criterion, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, name,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

DiskPoint active_point(const ScalarField& H, std::uint64_t seed0, double min_grad) {
    DomainSampler s(H.domain());
    for (std::uint64_t i = seed0;; ++i) {
        DiskPoint p = s.sample(i);
        if (H.gradient_norm(p) > min_grad) return p;
    }
}

void criterion_1() {
    auto t0 = clock_type::now();
    bool pass = true;
    double worst_rel = 0.0, worst_area = 0.0;
    for (int g : {2, 3}) {
        FundamentalDomain dom(g);
        double rel = dom.matrix_of(relator(g)).identity_error();
        worst_rel = std::max(worst_rel, rel);
        if (rel > 1e-8) pass = false;
        double area = mc_domain_area(dom, 1000000, 17);
        double expect = 4.0 * kPi * (g - 1);
        double err = std::abs(area - expect) / expect;
        worst_area = std::max(worst_area, err);
        if (err > 0.01) pass = false;
    }
    double secs = seconds_since(t0);
    if (secs > 10.0) pass = false;
    report(1, "group realization", pass,
           fmt("relator err %.2e <= 1e-8, area err %.3f%% <= 1%%, %.1fs <= 10s", worst_rel,
               100.0 * worst_area, secs));
}

void criterion_2() {
    auto t0 = clock_type::now();
    FundamentalDomain dom(2);
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> len(0, 20);
    int disagreements = 0;
    const int n_words = 10000;
    for (int i = 0; i < n_words; ++i) {
        Word w = random_reduced_word(len(rng), 2, rng());
        bool alg = is_trivial(w, 2);
        bool oracle = dom.matrix_of(w).identity_error() <= 1e-4;
        if (alg != oracle) ++disagreements;
    }
    double secs = seconds_since(t0);
    bool pass = disagreements == 0 && secs <= 30.0;
    report(2, "word-problem oracle", pass,
           fmt("%d/%d disagreements, %.1fs <= 30s", disagreements, n_words, secs));
}

void criterion_3(const ScalarField& H) {
    const FundamentalDomain& dom = H.domain();
    DiskPoint x0 = active_point(H, 100, 1.0);
    Trajectory t1 = integrate_flow(H, x0, 1.0, 1e-3, 0);
    Trajectory t2 = integrate_flow(H, x0, 1.0, 5e-4, 0);
    double ratio = t1.h_drift / std::max(t2.h_drift, 1e-300);

    DomainSampler sampler(dom);
    std::mt19937_64 rng(29);
    double worst = 0.0;
    const double h = 1e-5;
    for (int i = 0; i < 100; ++i) {
        DiskPoint p = sampler.sample(rng());
        auto lifted = [&](double dx, double dy) {
            Trajectory t = integrate_flow(H, DiskPoint(p.x + dx, p.y + dy), 1.0, 2e-3, 0);
            return apply(dom.matrix_of(t.deck), t.endpoint);
        };
        // central differences: near the support edge the one-sided scheme
        // picks up the flow map's large second derivatives
        DiskPoint f0 = lifted(0, 0);
        DiskPoint fxp = lifted(h, 0), fxm = lifted(-h, 0);
        DiskPoint fyp = lifted(0, h), fym = lifted(0, -h);
        double jac = ((fxp.x - fxm.x) * (fyp.y - fym.y) - (fyp.x - fym.x) * (fxp.y - fxm.y)) /
                     (4.0 * h * h);
        worst = std::max(worst, std::abs(jac * area_density(f0) / area_density(p) - 1.0));
    }
    bool pass = t1.h_drift <= 1e-6 && ratio >= 10.0 && worst <= 1e-3;
    report(3, "flow quality", pass,
           fmt("drift %.2e <= 1e-6, halving ratio %.1f >= 10, area defect %.2e <= 1e-3",
               t1.h_drift, ratio, worst));
}

void criterion_4(const ScalarField& H, const VanishingReport& vr) {
    DomainSampler sampler(H.domain());
    const int ps[5] = {1, 2, 4, 8, 16};
    int khat[5] = {0, 0, 0, 0, 0};
    int points = 0;
    for (std::uint64_t i = 0; points < 20; ++i) {
        DiskPoint x = sampler.sample(1000 + i);
        if (H.gradient_norm(x) < 1e-3) continue;
        ++points;
        for (int j = 0; j < 5; ++j) {
            Decomposition d = decompose_trajectory(H, x, ps[j], 1e-2);
            khat[j] = std::max(khat[j], d.remainder_length);
        }
    }
    int kmax = *std::max_element(khat, khat + 5);
    bool by8 = khat[0] == kmax || khat[1] == kmax || khat[2] == kmax || khat[3] == kmax;
    bool pass = by8 && vr.bound_violations == 0;
    report(4, "flow-loop decomposition structure", pass,
           fmt("K per p {%d,%d,%d,%d,%d} peaks by p=8: %s; bound violations %d/%d", khat[0],
               khat[1], khat[2], khat[3], khat[4], by8 ? "yes" : "no", vr.bound_violations,
               vr.estimate.samples));
}

void criterion_5(const VanishingReport& vr, double secs) {
    bool pass = vr.precondition_ok && vr.estimate.reliable &&
                std::abs(vr.estimate.mean) <= 3.0 * vr.estimate.std_error && secs <= 600.0;
    report(5, "vanishing on one autonomous flow", pass,
           fmt("mean %.3e within 3x std_error %.3e, precondition %s, %.1fs <= 600s",
               vr.estimate.mean, vr.estimate.std_error, vr.precondition_ok ? "ok" : "violated",
               secs));
}

void criterion_6(const UnboundednessReport& ur) {
    double diff = std::abs(ur.direct_double.mean - 2.0 * ur.direct.mean);
    double tol = 2.0 * (ur.direct_double.std_error + 2.0 * ur.direct.std_error);
    bool pass = diff <= tol;
    report(6, "homogeneity of the averaged value", pass,
           fmt("|v(f^2) - 2 v(f)| = %.3f <= %.3f", diff, tol));
}

void criterion_7(const UnboundednessReport& ur, const std::string& pattern, bool fallback_used) {
    bool increasing = true;
    for (size_t i = 1; i < ur.rows.size(); ++i)
        if (!(ur.rows[i].lower_bound > ur.rows[i - 1].lower_bound)) increasing = false;
    bool pass = ur.significant && increasing && ur.rows.size() == 10;
    report(7, "norm lower bounds grow linearly", pass,
           fmt("pattern '%s'%s, %.1f sigma, bounds %.3f .. %.3f %s", pattern.c_str(),
               fallback_used ? " (fallback)" : "",
               std::abs(ur.direct.mean) / std::max(ur.direct.std_error, 1e-300),
               ur.rows.front().lower_bound, ur.rows.back().lower_bound,
               increasing ? "strictly increasing" : "NOT increasing"));
}

void criterion_8(const ContinuityReport& cr) {
    bool ok = true;
    for (size_t i = 1; i < cr.rows.size(); ++i) {
        double slack = cr.rows[i].combined_err + cr.rows[i - 1].combined_err;
        if (cr.rows[i].difference > cr.rows[i - 1].difference + slack) ok = false;
    }
    report(8, "stability under small perturbations", ok,
           fmt("differences %.4f, %.4f, %.4f (combined errors ~%.4f)", cr.rows[0].difference,
               cr.rows[1].difference, cr.rows[2].difference, cr.rows[0].combined_err));
}

void criterion_9(const CountingQM& qm, const ScalarField& H) {
    nlohmann::json cfg = {{"genus", 2}, {"pattern", format_word(qm.pattern())},
                          {"p", 4},     {"samples", 200},
                          {"seed", 7},  {"hamiltonian", H.to_json()}};
    VanishingReport a = vanishing_experiment(qm, H, 4, 200, 7);
    VanishingReport b = vanishing_experiment(qm, H, 4, 200, 7);
    std::string ra = dump_without_timestamp(make_report("vanishing", cfg, 7, a.to_json()));
    std::string rb = dump_without_timestamp(make_report("vanishing", cfg, 7, b.to_json()));

    CompositeFlow flow{{&H, 1.0}};
    PsiEstimate par = estimate_psi(qm, flow, 2, 200, 11);
    PsiEstimate ser = estimate_psi_serial(qm, flow, 2, 200, 11);
    bool pass = ra == rb && par.mean == ser.mean && par.std_error == ser.std_error;
    report(9, "deterministic reports", pass,
           fmt("repeated report bytes %s, serial/parallel estimates %s", ra == rb ? "equal" : "differ",
               par.mean == ser.mean ? "equal" : "differ"));
}

} // namespace

int main() {
    std::printf("acceptance run: %s\n", kVersion);

    criterion_1();
    criterion_2();

    FundamentalDomain dom(2);
    ScalarField Ha(dom, collar_terms("a1"));
    ScalarField Hb(dom, collar_terms("b1"));
    CountingQM qm(parse_word("a1 b1"), 2);

    criterion_3(Ha);

    auto t0 = clock_type::now();
    VanishingReport vr = vanishing_experiment(qm, Ha, 8, 2000, 7);
    double vr_secs = seconds_since(t0);
    criterion_4(Ha, vr);
    criterion_5(vr, vr_secs);

    // shipped two-collar composition; fall back over the documented pattern
    // list if the shipped pattern is not significant
    CompositeFlow flow{{&Ha, 1.0}, {&Hb, 1.0}};
    std::vector<int> ns{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::string pattern = format_word(qm.pattern());
    bool fallback_used = false;
    UnboundednessReport ur = unboundedness_experiment(qm, flow, ns, 8, 2000, 42);
    if (!ur.significant) {
        for (const std::string& pat : fallback_patterns()) {
            CountingQM alt(parse_word(pat), 2);
            UnboundednessReport cand = unboundedness_experiment(alt, flow, ns, 8, 2000, 42);
            if (cand.significant) {
                ur = cand;
                pattern = pat;
                fallback_used = true;
                break;
            }
        }
    }
    criterion_6(ur);
    criterion_7(ur, pattern, fallback_used);

    ContinuityReport cr =
        continuity_experiment(qm, flow, continuity_perturbation(), {0.1, 0.05, 0.01}, 8, 2000, 42);
    criterion_8(cr);

    criterion_9(qm, Ha);

    std::printf("%s: %d criterion failure(s)\n", g_failures == 0 ? "ACCEPTED" : "REJECTED",
                g_failures);
    return g_failures;
}
