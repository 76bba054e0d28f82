#include "hamlab/polterovich.hpp"

#include "hamlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace hamlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::uint64_t kSeedStride = 0x9e3779b97f4a7c15ull;

std::uint64_t sample_seed(std::uint64_t seed, int index) {
    return seed + kSeedStride * static_cast<std::uint64_t>(index + 1);
}

struct SampleResult {
    double value = 0.0;
    bool kept = false;
};

PsiEstimate reduce_samples(const std::vector<SampleResult>& results, int p) {
    PsiEstimate out;
    out.samples = static_cast<int>(results.size());
    out.p_used = p;
    double sum = 0.0, sum2 = 0.0;
    int kept = 0;
    for (const SampleResult& r : results) {
        if (!r.kept) {
            ++out.skipped;
            continue;
        }
        sum += r.value;
        sum2 += r.value * r.value;
        ++kept;
    }
    if (kept > 0) {
        out.mean = sum / kept;
        double var = std::max(0.0, sum2 / kept - out.mean * out.mean);
        out.std_error = std::sqrt(var / kept);
    }
    out.reliable = out.skipped <= 0.05 * out.samples;
    return out;
}

PsiEstimate run_psi(const CountingQM& qm, const CompositeFlow& flow, int p, int n_samples,
                    std::uint64_t seed, const PsiOptions& opt, bool parallel) {
    if (p < 1) throw config_error("estimate_psi needs p >= 1");
    if (n_samples < 100) throw config_error("estimate_psi needs n_samples >= 100");
    if (flow.empty()) throw config_error("estimate_psi needs a non-empty flow");
    const FundamentalDomain& dom = flow.front().field->domain();
    const double area = 4.0 * kPi * (dom.genus() - 1);
    DomainSampler sampler(dom);

    std::vector<SampleResult> results(n_samples);
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
    for (int i = 0; i < n_samples; ++i) {
        try {
            DiskPoint x = sampler.sample(sample_seed(seed, i));
            Word w = loop_class(flow, x, p, opt.dt).word;
            results[i].value = area * static_cast<double>(qm.evaluate(w)) / p;
            results[i].kept = true;
        } catch (const std::exception&) {
            results[i].kept = false;
        }
    }
    return reduce_samples(results, p);
}

} // namespace

nlohmann::json PsiEstimate::to_json() const {
    return {{"mean", mean},        {"std_error", std_error}, {"samples", samples},
            {"p_used", p_used},    {"skipped", skipped},     {"reliable", reliable}};
}

PsiEstimate estimate_psi(const CountingQM& qm, const CompositeFlow& flow, int p, int n_samples,
                         std::uint64_t seed, const PsiOptions& opt) {
    return run_psi(qm, flow, p, n_samples, seed, opt, opt.parallel);
}

PsiEstimate estimate_psi_serial(const CountingQM& qm, const CompositeFlow& flow, int p,
                                int n_samples, std::uint64_t seed, const PsiOptions& opt) {
    return run_psi(qm, flow, p, n_samples, seed, opt, false);
}

double norm_lower_bound(double psi_value, double defect, int n) {
    if (defect <= 0.0) throw config_error("norm_lower_bound needs defect > 0");
    return n * std::abs(psi_value) / defect;
}

nlohmann::json VanishingReport::to_json() const {
    return {{"estimate", estimate.to_json()},
            {"level_classes", level_classes},
            {"precondition_ok", precondition_ok},
            {"empirical_k", empirical_k},
            {"defect", defect},
            {"bound_rhs", bound_rhs},
            {"bound_violations", bound_violations},
            {"probes", probes},
            {"note", "counting quasi-morphism stands in for a non-constructive family; "
                     "vanishing is verified only on the level classes that occur here"}};
}

namespace {

// canonical representative of the conjugacy-ish class: lexicographically
// minimal rotation of the cyclically reduced word
std::string cyclic_canonical(const Word& w, int genus) {
    Word u = cyclic_reduce(dehn_reduce(free_reduce(w), genus)).first;
    if (u.empty()) return "";
    std::string best;
    for (size_t s = 0; s < u.size(); ++s) {
        Word rot;
        for (size_t i = 0; i < u.size(); ++i) rot.push_back(u[(s + i) % u.size()]);
        std::string repr = format_word(rot);
        if (best.empty() || repr < best) best = repr;
    }
    return best;
}

} // namespace

VanishingReport vanishing_experiment(const CountingQM& qm, const ScalarField& H, int p,
                                     int n_samples, std::uint64_t seed,
                                     const ExperimentOptions& opt) {
    const int genus = H.domain().genus();
    VanishingReport rep;

    // probe level-set topology and the decomposition constant on a small set
    // of regular points
    DomainSampler sampler(H.domain());
    std::set<std::string> classes;
    std::vector<Word> class_words;
    int probes_done = 0;
    std::uint64_t probe_seed = seed ^ 0xfeedfaceull;
    for (int i = 0; probes_done < opt.probe_points && i < 20 * opt.probe_points; ++i) {
        try {
            DiskPoint x = sampler.sample(sample_seed(probe_seed, i));
            LoopClass gamma = level_loop(H, x, opt.level);
            Decomposition dec = decompose_trajectory(H, x, p, opt.dt, opt.level);
            rep.empirical_k = std::max(rep.empirical_k, dec.remainder_length);
            std::string canon = cyclic_canonical(gamma.word, genus);
            if (classes.insert(canon).second) class_words.push_back(gamma.word);
            ++probes_done;
        } catch (const std::exception&) {
            // non-regular or non-closing point: skipped, full-measure argument
        }
    }
    rep.probes = probes_done;
    rep.level_classes.assign(classes.begin(), classes.end());

    if (class_words.empty()) class_words.push_back(Word{});
    rep.precondition_ok = true;
    for (const Word& w : class_words) {
        if (w.empty()) continue;
        HomogenizedValue h = qm.homogenize(w, 16);
        if (std::abs(h.value) > h.error_bound) rep.precondition_ok = false;
    }

    rep.defect = qm.defect_estimate(opt.defect_samples, opt.defect_max_len, seed ^ 0xdefec7ull);
    rep.bound_rhs = 2.0 * rep.defect * (rep.empirical_k + 1) / p;

    // one sampling pass feeds both the estimate and the per-sample bound
    // check |psi([h^p_x])| / p <= 2 D (K+1) / p of the final display
    const double area = 4.0 * kPi * (genus - 1);
    std::vector<SampleResult> results(n_samples);
    int violations = 0;
#pragma omp parallel for schedule(dynamic, 4) reduction(+ : violations)
    for (int i = 0; i < n_samples; ++i) {
        try {
            DiskPoint x = sampler.sample(sample_seed(seed, i));
            Word w = loop_class(H, x, p, opt.dt).word;
            double psi = static_cast<double>(qm.evaluate(w));
            results[i].value = area * psi / p;
            results[i].kept = true;
            if (std::abs(psi) / p > rep.bound_rhs + 1e-12) ++violations;
        } catch (const std::exception&) {
            results[i].kept = false;
        }
    }
    rep.bound_violations = violations;
    rep.estimate = reduce_samples(results, p);
    return rep;
}

nlohmann::json UnboundednessReport::to_json() const {
    nlohmann::json tab = nlohmann::json::array();
    for (const auto& r : rows)
        tab.push_back({{"n", r.n},
                       {"psi_n", r.psi_n},
                       {"defect", r.defect},
                       {"lower_bound", r.lower_bound}});
    return {{"direct", direct.to_json()},
            {"direct_double", direct_double.to_json()},
            {"defect", defect},
            {"significant", significant},
            {"table", tab},
            {"note", "defect is an empirical lower bound, so the norm bounds are "
                     "optimistic and labeled empirical"}};
}

UnboundednessReport unboundedness_experiment(const CountingQM& qm, const CompositeFlow& flow,
                                             const std::vector<int>& n_list, int p, int n_samples,
                                             std::uint64_t seed, const ExperimentOptions& opt) {
    UnboundednessReport rep;
    PsiOptions popt;
    popt.dt = opt.dt;

    rep.direct = estimate_psi(qm, flow, p, n_samples, seed, popt);

    CompositeFlow doubled = flow;
    doubled.insert(doubled.end(), flow.begin(), flow.end());
    rep.direct_double = estimate_psi(qm, doubled, p, n_samples, seed, popt);

    rep.defect = qm.defect_estimate(opt.defect_samples, opt.defect_max_len, seed ^ 0xdefec7ull);
    rep.significant = std::abs(rep.direct.mean) > 3.0 * rep.direct.std_error;

    double d_hat = std::max(rep.defect, 1e-12);
    for (int n : n_list) {
        UnboundednessRow row;
        row.n = n;
        row.psi_n = n * rep.direct.mean; // homogeneity
        row.defect = rep.defect;
        row.lower_bound = norm_lower_bound(rep.direct.mean, d_hat, n);
        rep.rows.push_back(row);
    }
    return rep;
}

nlohmann::json ContinuityReport::to_json() const {
    nlohmann::json tab = nlohmann::json::array();
    for (const auto& r : rows)
        tab.push_back({{"epsilon", r.epsilon},
                       {"difference", r.difference},
                       {"combined_err", r.combined_err}});
    return {{"base", base.to_json()}, {"table", tab}};
}

ContinuityReport continuity_experiment(const CountingQM& qm, const CompositeFlow& flow,
                                       const BumpTerm& perturbation,
                                       const std::vector<double>& epsilons, int p, int n_samples,
                                       std::uint64_t seed, const ExperimentOptions& opt) {
    if (flow.empty()) throw config_error("continuity_experiment needs a non-empty flow");
    for (size_t i = 1; i < epsilons.size(); ++i)
        if (!(epsilons[i] < epsilons[i - 1]) || epsilons[i] <= 0.0)
            throw config_error("epsilons must be positive and strictly decreasing");

    ContinuityReport rep;
    PsiOptions popt;
    popt.dt = opt.dt;
    rep.base = estimate_psi(qm, flow, p, n_samples, seed, popt);

    const ScalarField& last = *flow.back().field;
    for (double eps : epsilons) {
        std::vector<FieldTerm> terms = last.terms();
        BumpTerm scaled = perturbation;
        scaled.amplitude *= eps;
        terms.push_back(scaled);
        ScalarField h_eps(last.domain(), std::move(terms));
        CompositeFlow perturbed = flow;
        perturbed.back().field = &h_eps;
        PsiEstimate est = estimate_psi(qm, perturbed, p, n_samples, seed, popt);
        rep.rows.push_back({eps, std::abs(est.mean - rep.base.mean),
                            est.std_error + rep.base.std_error});
    }
    return rep;
}

} // namespace hamlab
