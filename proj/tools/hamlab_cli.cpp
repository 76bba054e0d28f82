#include "hamlab/errors.hpp"
#include "hamlab/polterovich.hpp"
#include "hamlab/presets.hpp"
#include "hamlab/report.hpp"
#include "hamlab/verify.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

using namespace hamlab;
using nlohmann::json;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw config_error("config is not valid JSON: " + std::string(e.what()));
    }
    return j;
}

int require_genus(const json& cfg) {
    if (!cfg.contains("genus") || !cfg["genus"].is_number_integer())
        throw config_error("genus: missing integer field");
    int genus = cfg["genus"].get<int>();
    if (genus < 2) throw config_error("genus must be >= 2");
    return genus;
}

double field_or(const json& cfg, const char* key, double fallback) {
    if (!cfg.contains(key)) return fallback;
    if (!cfg[key].is_number()) throw config_error(std::string(key) + ": expected a number");
    return cfg[key].get<double>();
}

// segments own their fields; the flow holds raw pointers into `fields`
struct LoadedFlow {
    std::vector<std::unique_ptr<ScalarField>> fields;
    CompositeFlow flow;
};

LoadedFlow load_flow(const FundamentalDomain& dom, const json& cfg) {
    LoadedFlow out;
    if (cfg.contains("flow")) {
        if (!cfg["flow"].is_array() || cfg["flow"].empty())
            throw config_error("flow: expected a non-empty array of segments");
        int idx = 0;
        for (const json& seg : cfg["flow"]) {
            std::string path = "flow[" + std::to_string(idx++) + "]";
            if (!seg.contains("hamiltonian"))
                throw config_error(path + ".hamiltonian: missing");
            double duration = seg.value("duration", 1.0);
            if (duration <= 0.0) throw config_error(path + ".duration: must be positive");
            out.fields.push_back(
                std::make_unique<ScalarField>(ScalarField::from_json(dom, seg["hamiltonian"])));
            out.flow.push_back({out.fields.back().get(), duration});
        }
    } else if (cfg.contains("hamiltonian")) {
        out.fields.push_back(
            std::make_unique<ScalarField>(ScalarField::from_json(dom, cfg["hamiltonian"])));
        out.flow.push_back({out.fields.back().get(), 1.0});
    } else {
        throw config_error("config needs either 'hamiltonian' or 'flow'");
    }
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot write output file: " + path.string());
    f << content;
}

int run_verify(const std::string& suite, int genus, std::uint64_t seed, bool quick) {
    if (genus < 2) {
        std::fprintf(stderr, "error: genus must be >= 2\n");
        return kExitConfig;
    }
    std::vector<CheckResult> results;
    auto append = [&](std::vector<CheckResult> r) {
        results.insert(results.end(), r.begin(), r.end());
    };
    if (suite == "geometry" || suite == "all") append(verify_geometry(genus, seed, quick));
    if (suite == "group" || suite == "all") append(verify_group(genus, seed, quick));
    if (suite == "dynamics" || suite == "all") append(verify_dynamics(genus, seed, quick));

    for (const CheckResult& r : results)
        std::printf("[%s] %s: %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    std::printf("%zu checks, %s\n", results.size(), all_pass(results) ? "all passed" : "FAILED");
    return all_pass(results) ? 0 : kExitFailure;
}

int run_flow(const json& cfg, std::uint64_t seed, const std::filesystem::path& out_dir) {
    int genus = require_genus(cfg);
    FundamentalDomain dom(genus);
    LoadedFlow lf = load_flow(dom, cfg);
    const ScalarField& H = *lf.flow.front().field;

    double T = field_or(cfg, "T", 1.0);
    double dt = field_or(cfg, "dt", 1e-3);
    DiskPoint x0;
    if (cfg.contains("x0")) {
        if (!cfg["x0"].is_array() || cfg["x0"].size() != 2)
            throw config_error("x0: expected [x, y]");
        x0 = DiskPoint(cfg["x0"][0].get<double>(), cfg["x0"][1].get<double>());
    } else {
        x0 = DomainSampler(dom).sample(seed);
    }

    Trajectory traj = integrate_flow(H, x0, T, dt, 1);

    std::string csv = "t,x,y,deck_letter\n";
    char line[128];
    for (const TrajectorySample& s : traj.samples) {
        std::snprintf(line, sizeof line, "%.10g,%.17g,%.17g,%s\n", s.t, s.point.x, s.point.y,
                      s.has_crossing ? letter_token(s.crossed).c_str() : "");
        csv += line;
    }
    std::filesystem::create_directories(out_dir);
    write_file(out_dir / "trajectory.csv", csv);

    std::printf("deck word: %s\n", format_word(traj.deck).c_str());
    std::printf("endpoint: (%.12g, %.12g)  h_drift: %.3e  rows: %zu\n", traj.endpoint.x,
                traj.endpoint.y, traj.h_drift, traj.samples.size());
    std::printf("wrote %s\n", (out_dir / "trajectory.csv").string().c_str());
    return 0;
}

std::string unboundedness_csv(const UnboundednessReport& rep) {
    std::string csv = "n,psi_n,defect,lower_bound\n";
    char line[128];
    for (const UnboundednessRow& r : rep.rows) {
        std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g\n", r.n, r.psi_n, r.defect,
                      r.lower_bound);
        csv += line;
    }
    return csv;
}

std::string continuity_csv(const ContinuityReport& rep) {
    std::string csv = "epsilon,difference,combined_err\n";
    char line[128];
    for (const ContinuityRow& r : rep.rows) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", r.epsilon, r.difference,
                      r.combined_err);
        csv += line;
    }
    return csv;
}

std::string vanishing_csv(const VanishingReport& rep) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "key,value\nmean,%.17g\nstd_error,%.17g\nsamples,%d\nskipped,%d\n"
                  "empirical_k,%d\ndefect,%.17g\nbound_rhs,%.17g\nbound_violations,%d\n"
                  "precondition_ok,%d\n",
                  rep.estimate.mean, rep.estimate.std_error, rep.estimate.samples,
                  rep.estimate.skipped, rep.empirical_k, rep.defect, rep.bound_rhs,
                  rep.bound_violations, rep.precondition_ok ? 1 : 0);
    return buf;
}

int run_experiment(const std::string& kind, json cfg, std::optional<std::uint64_t> seed_flag,
                   std::optional<int> samples_flag, const std::filesystem::path& out_dir) {
    // flag overrides become part of the resolved config embedded in the report
    if (seed_flag) cfg["seed"] = *seed_flag;
    if (samples_flag) cfg["samples"] = *samples_flag;

    int genus = require_genus(cfg);
    std::uint64_t seed = cfg.value("seed", 1ull);
    int samples = cfg.value("samples", 2000);
    int p = cfg.value("p", 8);
    if (samples < 100) throw config_error("samples: must be >= 100");
    if (p < 1) throw config_error("p: must be >= 1");
    if (!cfg.contains("pattern") || !cfg["pattern"].is_string())
        throw config_error("pattern: missing string field");

    FundamentalDomain dom(genus);
    CountingQM qm(parse_word(cfg["pattern"].get<std::string>()), genus);
    LoadedFlow lf = load_flow(dom, cfg);

    ExperimentOptions opt;
    opt.dt = field_or(cfg, "dt", opt.dt);

    json body;
    std::string csv;
    bool reliable = true;

    if (kind == "vanishing") {
        VanishingReport rep =
            vanishing_experiment(qm, *lf.flow.front().field, p, samples, seed, opt);
        if (!rep.precondition_ok)
            std::fprintf(stderr, "warning: pattern does not vanish on the sampled level classes\n");
        std::printf("estimate: %.6f +- %.6f   empirical K: %d   bound violations: %d/%d\n",
                    rep.estimate.mean, rep.estimate.std_error, rep.empirical_k,
                    rep.bound_violations, rep.estimate.samples);
        body = rep.to_json();
        csv = vanishing_csv(rep);
        reliable = rep.estimate.reliable;
    } else if (kind == "unboundedness") {
        std::vector<int> n_list = cfg.value("n_list", std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
        if (n_list.empty()) throw config_error("n_list: must be non-empty");
        UnboundednessReport rep = unboundedness_experiment(qm, lf.flow, n_list, p, samples, seed, opt);
        std::printf("estimate: %.6f +- %.6f   %ssignificant at 3 sigma\n", rep.direct.mean,
                    rep.direct.std_error, rep.significant ? "" : "NOT ");
        for (const UnboundednessRow& r : rep.rows)
            std::printf("  n=%2d  lower bound %.4f\n", r.n, r.lower_bound);
        body = rep.to_json();
        csv = unboundedness_csv(rep);
        reliable = rep.direct.reliable && rep.direct_double.reliable;
    } else if (kind == "continuity") {
        std::vector<double> eps = cfg.value("epsilons", std::vector<double>{0.1, 0.05, 0.01});
        BumpTerm pert = continuity_perturbation();
        if (cfg.contains("perturbation")) {
            json pj = {{"terms", {cfg["perturbation"]}}};
            pj["terms"][0]["kind"] = "bump";
            ScalarField probe = ScalarField::from_json(dom, pj); // reuse schema validation
            const auto& bt = std::get<BumpTerm>(probe.terms()[0]);
            pert = bt;
        }
        ContinuityReport rep =
            continuity_experiment(qm, lf.flow, pert, eps, p, samples, seed, opt);
        std::printf("base estimate: %.6f +- %.6f\n", rep.base.mean, rep.base.std_error);
        for (const ContinuityRow& r : rep.rows)
            std::printf("  eps=%.3g  |difference| %.4f (+- %.4f)\n", r.epsilon, r.difference,
                        r.combined_err);
        body = rep.to_json();
        csv = continuity_csv(rep);
        reliable = rep.base.reliable;
    } else {
        throw config_error("kind: expected vanishing, unboundedness or continuity");
    }

    std::filesystem::create_directories(out_dir);
    write_file(out_dir / "report.json",
               make_report(kind, cfg, seed, body).dump(2) + "\n");
    write_file(out_dir / "table.csv", csv);
    std::printf("wrote %s and %s\n", (out_dir / "report.json").string().c_str(),
                (out_dir / "table.csv").string().c_str());

    if (!reliable) {
        std::fprintf(stderr, "error: skip rate exceeded the 5%% budget, estimate unreliable\n");
        return kExitNumeric;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperbolic-surface Hamiltonian flow laboratory"};
    app.require_subcommand(1);

    // verify
    std::string suite = "all";
    int genus = 2;
    std::uint64_t verify_seed = 1;
    bool quick = false;
    CLI::App* verify = app.add_subcommand("verify", "run module invariant suites");
    verify->add_option("--suite", suite, "geometry, group, dynamics or all")
        ->check(CLI::IsMember({"geometry", "group", "dynamics", "all"}));
    verify->add_option("--genus", genus, "surface genus");
    verify->add_option("--seed", verify_seed, "random seed");
    verify->add_flag("--quick", quick, "smaller sample sizes");

    // flow
    std::string flow_config;
    std::uint64_t flow_seed = 1;
    std::string flow_out = ".";
    CLI::App* flow = app.add_subcommand("flow", "integrate one trajectory and write a CSV");
    flow->add_option("--config", flow_config, "JSON config path")->required();
    flow->add_option("--seed", flow_seed, "seed for the start point when x0 is absent");
    flow->add_option("--out", flow_out, "output directory");

    // experiment
    std::string kind, exp_config, exp_out = ".";
    std::optional<std::uint64_t> exp_seed;
    std::optional<int> exp_samples;
    CLI::App* experiment = app.add_subcommand("experiment", "run a sampled experiment");
    experiment->add_option("--kind", kind, "vanishing, unboundedness or continuity")->required();
    experiment->add_option("--config", exp_config, "JSON config path")->required();
    experiment
        ->add_option("--seed", exp_seed, "override the config seed");
    experiment->add_option("--samples", exp_samples, "override the config sample count");
    experiment->add_option("--out", exp_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return run_verify(suite, genus, verify_seed, quick);
        if (flow->parsed()) return run_flow(load_config(flow_config), flow_seed, flow_out);
        return run_experiment(kind, load_config(exp_config), exp_seed, exp_samples, exp_out);
    } catch (const config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return kExitNumeric;
    }
}
