#include "bbench/commands.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "bbench/io.hpp"
#include "breather/experiments.hpp"
#include "breather/functionals.hpp"
#include "breather/spectral.hpp"

namespace bbench {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

class Report {
public:
    Report(std::string command, const RunConfig& cfg, const CommandOptions& opts)
        : command_(std::move(command)), cfg_(cfg), opts_(opts) {}

    /// Passes when value <= tolerance[tol_key].
    bool check(const std::string& name, double value, const std::string& tol_key,
               json context = json::object(), bool relative = false) {
        const Threshold& th = cfg_.tolerances.entry(tol_key);
        thresholds_[tol_key] = {{"value", th.value}, {"source", th.source}};
        const bool ok = std::isfinite(value) && value <= th.value;
        checks_.push_back({{"name", name},
                           {"value", value},
                           {"tolerance", th.value},
                           {"tolerance_key", tol_key},
                           {"relative", relative},
                           {"passed", ok},
                           {"context", std::move(context)}});
        all_ok_ = all_ok_ && ok;
        return ok;
    }

    /// Lower-bound check: passes when value >= bound.
    bool check_at_least(const std::string& name, double value, double bound,
                        const std::string& tol_key, json context = json::object()) {
        const Threshold& th = cfg_.tolerances.entry(tol_key);
        thresholds_[tol_key] = {{"value", th.value}, {"source", th.source}};
        const bool ok = value >= bound;
        checks_.push_back({{"name", name},
                           {"value", value},
                           {"lower_bound", bound},
                           {"tolerance_key", tol_key},
                           {"passed", ok},
                           {"context", std::move(context)}});
        all_ok_ = all_ok_ && ok;
        return ok;
    }

    bool check_count(const std::string& name, std::size_t value, std::size_t expected,
                     json context = json::object()) {
        const bool ok = value == expected;
        checks_.push_back({{"name", name},
                           {"value", value},
                           {"expected", expected},
                           {"passed", ok},
                           {"context", std::move(context)}});
        all_ok_ = all_ok_ && ok;
        return ok;
    }

    void measure(const std::string& key, json value) { measurements_[key] = std::move(value); }

    void tail_warning(const mkdv::Field& f, const std::string& label) {
        const double tail = f.tail_magnitude();
        if (tail > mkdv::kTailThreshold) {
            std::ostringstream msg;
            msg << label << ": boundary tail magnitude " << tail << " exceeds " << mkdv::kTailThreshold;
            warnings_.push_back(msg.str());
        }
    }

    void warn(const std::string& msg) { warnings_.push_back(msg); }

    void incomplete(const std::string& why) {
        complete_ = false;
        failure_ = why;
    }

    bool complete() const noexcept { return complete_; }

    int finish() const {
        const char* status = !complete_ ? "incomplete" : (all_ok_ ? "pass" : "fail");
        json j;
        j["command"] = command_;
        j["status"] = status;
        j["complete"] = complete_;
        if (!complete_) j["failure"] = failure_;
        j["strict"] = opts_.strict;
        j["checks"] = checks_;
        j["measurements"] = measurements_;
        j["thresholds"] = thresholds_;
        j["warnings"] = warnings_;
        j["config"] = config_to_json(cfg_);
        write_json(opts_.out_dir / "report.json", j);

        std::size_t passed = 0;
        for (const json& c : checks_) passed += c.at("passed").get<bool>() ? 1 : 0;
        std::printf("%s: %zu/%zu checks passed (%s)\n", command_.c_str(), passed, checks_.size(), status);
        for (const json& c : checks_) {
            if (!c.at("passed").get<bool>()) {
                std::printf("  FAIL %s = %s %s\n", c.at("name").get<std::string>().c_str(),
                            c.at("value").dump().c_str(), c.at("context").dump().c_str());
            }
        }
        if (!complete_) {
            std::fprintf(stderr, "%s: %s\n", command_.c_str(), failure_.c_str());
            return kExitFault;
        }
        return all_ok_ ? kExitPass : kExitChecksFailed;
    }

private:
    std::string command_;
    const RunConfig& cfg_;
    const CommandOptions& opts_;
    json checks_ = json::array();
    json measurements_ = json::object();
    json thresholds_ = json::object();
    json warnings_ = json::array();
    bool all_ok_ = true;
    bool complete_ = true;
    std::string failure_;
};

mkdv::TailPolicy policy(const CommandOptions& opts) {
    return opts.strict ? mkdv::TailPolicy::strict : mkdv::TailPolicy::lenient;
}

json context(const mkdv::BreatherParams& p, double t) {
    return {{"alpha", p.alpha}, {"beta", p.beta}, {"t", t}};
}

}  // namespace

int run_verify(const RunConfig& cfg, const CommandOptions& opts) {
    const mkdv::GridSpec g = cfg.grid();
    const auto params = cfg.suite_params.empty() ? mkdv::default_suite_params() : cfg.suite_params;
    const auto times = cfg.suite_times.empty() ? mkdv::default_suite_times() : cfg.suite_times;
    Report rep("verify", cfg, opts);

    for (const auto& p : params) {
        for (double t : times) rep.tail_warning(mkdv::breather(p, t, g, policy(opts)), "breather");
    }
    for (const mkdv::CheckResult& c : mkdv::run_identity_suite(params, times, g)) {
        rep.check(c.name, c.value, c.name, context(c.p, c.t), c.relative);
    }
    const mkdv::Field q = mkdv::soliton({1.0, 0.0}, 0.0, g, policy(opts));
    rep.check("soliton_limit", mkdv::elliptic_residual(q, 0.0, 1.0).sup_norm(), "soliton_limit",
              {{"alpha", 0.0}, {"beta", 1.0}});
    rep.measure("grid", {{"L", g.half_width()}, {"N", g.size()}});
    return rep.finish();
}

int run_spectrum(const RunConfig& cfg, const CommandOptions& opts) {
    const mkdv::GridSpec g = cfg.grid();
    Report rep("spectrum", cfg, opts);
    rep.tail_warning(mkdv::breather(cfg.params, 0.0, g, policy(opts)), "breather");
    const mkdv::SpectrumExperiment ex = mkdv::run_spectrum_experiment(cfg.params, 0.0, g, cfg.spectrum_k);
    const mkdv::SpectrumReport& r = ex.report;
    write_eigenvalues_csv(opts.out_dir / "eigenvalues.csv", r.eigenvalues);

    const json ctx = context(cfg.params, 0.0);
    rep.check_count("n_negative", r.n_negative, 1, ctx);
    rep.check_count("kernel_count", r.kernel_count, 2, ctx);
    const double edge = r.essential_edge_theory;
    rep.check_at_least("above_kernel", ex.min_above_kernel,
                       cfg.tolerances["edge_fraction"] * edge, "edge_fraction", ctx);
    rep.measure("eigenvalues", r.eigenvalues);
    rep.measure("essential_edge_theory", edge);
    rep.measure("lowest_eigenvalue", r.lowest_eigenvalue);
    rep.measure("tol_negative", r.tol_negative);
    rep.measure("tol_kernel", r.tol_kernel);
    rep.measure("symmetry_defect", ex.symmetry_defect);
    return rep.finish();
}

int run_evolve(const RunConfig& cfg, const CommandOptions& opts) {
    const mkdv::GridSpec g = cfg.grid();
    Report rep("evolve", cfg, opts);
    const mkdv::Field u0 = mkdv::breather(cfg.params, 0.0, g, policy(opts));
    rep.tail_warning(u0, "initial data");

    mkdv::EvolutionConfig ev = cfg.evolution;
    ev.strict_tails = ev.strict_tails || opts.strict;
    if (ev.steps() % ev.output_stride != 0) {
        rep.warn("output_stride does not divide the step count; errors refer to the last recorded time");
    }
    mkdv::Trajectory traj;
    try {
        traj = mkdv::evolve(u0, ev);
    } catch (const mkdv::EvolutionFault& e) {
        traj = e.partial();
        rep.incomplete(e.what());
    }

    std::vector<ErrorRow> rows;
    double final_error = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        const mkdv::Field exact = mkdv::breather(cfg.params, t, g);
        final_error = mkdv::sobolev_norm(traj.snapshots[i] - exact, 2);
        const auto& f = traj.conserved_series[i];
        rows.push_back({t, final_error, cfg.params.x1, cfg.params.x2, f.mass, f.energy, f.f_value, f.lyapunov});
    }
    write_error_series_csv(opts.out_dir / "error_series.csv", rows);
    write_snapshots_csv(opts.out_dir / "snapshots.csv", traj.times, traj.snapshots,
                        cfg.output.snapshot_every, cfg.output.space_every);

    if (!traj.empty()) {
        const double t_final = traj.times.back();
        rep.check("propagation", final_error, "propagation", context(cfg.params, t_final));
        const mkdv::ConservationDrift d = mkdv::conservation_drift(traj, cfg.params.alpha, cfg.params.beta);
        rep.check("drift_mass", d.mass, "drift");
        rep.check("drift_energy", d.energy, "drift");
        rep.check("drift_f", d.f_value, "drift");
        rep.check("drift_lyapunov", d.lyapunov, "drift");
        rep.measure("final_time", t_final);
        rep.measure("steps", ev.steps());
    }
    return rep.finish();
}

int run_stability(const RunConfig& cfg, const CommandOptions& opts) {
    const mkdv::GridSpec g = cfg.grid();
    Report rep("stability", cfg, opts);

    mkdv::StabilityConfig sc;
    sc.p = cfg.params;
    sc.eta = cfg.stability.eta;
    sc.seed = cfg.stability.seed;
    sc.k_max = cfg.stability.k_max;
    sc.t_end = cfg.stability.t_end;
    sc.evolution = cfg.evolution;
    sc.evolution.strict_tails = sc.evolution.strict_tails || opts.strict;
    sc.sup_ratio_limit = cfg.tolerances["sup_ratio"];
    sc.growth_limit = cfg.tolerances["growth"];

    const mkdv::Field u0 =
        mkdv::breather(sc.p, 0.0, g, policy(opts)) + mkdv::make_perturbation(sc.seed, sc.eta, sc.k_max, g);
    rep.tail_warning(u0, "initial data");
    if (opts.strict) mkdv::check_tails(u0, mkdv::TailPolicy::strict, "stability initial data");

    const mkdv::StabilityReport r = mkdv::run_stability(sc, g);
    if (!r.complete) rep.incomplete(r.failure);

    std::vector<ErrorRow> rows;
    for (std::size_t i = 0; i < r.times.size(); ++i) {
        const auto& f = r.conserved[i];
        rows.push_back({r.times[i], r.z_h2_norms[i], r.shift_tracks[i].x1, r.shift_tracks[i].x2,
                        f.mass, f.energy, f.f_value, f.lyapunov});
    }
    write_error_series_csv(opts.out_dir / "error_series.csv", rows);
    write_snapshots_csv(opts.out_dir / "snapshots.csv", r.times, r.snapshots,
                        cfg.output.snapshot_every, cfg.output.space_every);

    const json ctx = {{"eta", sc.eta}, {"seed", sc.seed}, {"t_end", sc.t_end}};
    rep.check("sup_ratio", r.sup_ratio, "sup_ratio", ctx);
    rep.check("growth_ratio", r.growth_ratio, "growth", ctx);

    double worst_residual = 0.0;
    int max_iters = 0;
    for (const auto& f : r.shift_tracks) {
        worst_residual = std::max({worst_residual, std::abs(f.ortho_residuals[0]), std::abs(f.ortho_residuals[1])});
        max_iters = std::max(max_iters, f.newton_iters);
    }
    rep.measure("sup_z_h2", r.sup_z);
    rep.measure("z_h2_initial", r.z_h2_norms.empty() ? 0.0 : r.z_h2_norms.front());
    rep.measure("max_ortho_residual", worst_residual);
    rep.measure("max_newton_iterations", max_iters);
    rep.measure("drift", {{"M", r.drift.mass}, {"E", r.drift.energy}, {"F", r.drift.f_value}, {"H", r.drift.lyapunov}});
    return rep.finish();
}

int run_soliton(const RunConfig& cfg, const CommandOptions& opts) {
    const mkdv::GridSpec base = cfg.grid();
    Report rep("soliton", cfg, opts);
    json cases = json::array();
    for (double c : cfg.soliton_speeds) {
        const mkdv::GridSpec g = mkdv::grid_for_rate(std::sqrt(c), base);
        rep.tail_warning(mkdv::soliton({c, 0.0}, 0.0, g, policy(opts)), "soliton");
        const mkdv::SolitonCase s = mkdv::run_soliton_case(c, g);
        const json ctx = {{"c", c}, {"L", s.half_width}, {"N", s.n_points}};
        rep.check("soliton_mass", s.mass_error, "soliton_mass", ctx);
        rep.check("mass_derivative", std::abs(s.mass_derivative.numeric - s.mass_derivative.analytic),
                  "mass_derivative", ctx);
        rep.check("soliton_ode", s.ode_residual, "soliton_ode", ctx);
        rep.check("soliton_limit", s.elliptic_limit, "soliton_limit", ctx);
        rep.check("expansion_slope", std::abs(s.expansion_slope - 3.0), "slope_band", ctx);
        cases.push_back({{"c", c},
                         {"mass", s.mass},
                         {"mass_derivative", s.mass_derivative.numeric},
                         {"expansion_slope", s.expansion_slope},
                         {"kernel_form", s.kernel_form}});
    }
    rep.measure("cases", cases);

    // Conservation along a travelling soliton.
    mkdv::EvolutionConfig ev = cfg.evolution;
    ev.t_end = cfg.soliton_t_end;
    ev.output_stride = std::max<std::size_t>(1, ev.steps() / 50);
    ev.strict_tails = ev.strict_tails || opts.strict;
    const mkdv::Field q = mkdv::soliton({1.0, 0.0}, 0.0, base, policy(opts));
    try {
        const mkdv::Trajectory traj = mkdv::evolve(q, ev);
        const mkdv::ConservationDrift d = mkdv::conservation_drift(traj, 0.0, 1.0);
        const json ctx = {{"c", 1.0}, {"t_end", ev.t_end}};
        rep.check("drift_mass", d.mass, "drift", ctx);
        rep.check("drift_energy", d.energy, "drift", ctx);
        rep.check("drift_f", d.f_value, "drift", ctx);
        rep.check("drift_lyapunov", d.lyapunov, "drift", ctx);
    } catch (const mkdv::EvolutionFault& e) {
        rep.incomplete(e.what());
    }
    return rep.finish();
}

int cli_main(int argc, char** argv) {
    CLI::App app{"Numerical checks for mKdV breathers and solitons", "breather-bench"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string out_dir;
    bool strict = false;
    struct Entry {
        const char* name;
        const char* help;
        int (*fn)(const RunConfig&, const CommandOptions&);
    };
    const Entry entries[] = {
        {"verify", "closed-form values and identity residuals", &run_verify},
        {"spectrum", "lowest eigenvalues of the linearized operator", &run_spectrum},
        {"evolve", "propagate the breather and compare with the exact solution", &run_evolve},
        {"stability", "perturbed breather with modulation fitting", &run_stability},
        {"soliton", "soliton values, expansion and conservation", &run_soliton},
    };
    std::vector<std::pair<CLI::App*, const Entry*>> subs;
    for (const Entry& e : entries) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_dir, "output directory")->required();
        sub->add_flag("--strict", strict, "treat undecayed boundary tails as errors");
        subs.emplace_back(sub, &e);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    const Entry* chosen = nullptr;
    for (const auto& [sub, e] : subs) {
        if (sub->parsed()) chosen = e;
    }

    RunConfig cfg;
    CommandOptions opts;
    try {
        cfg = load_config(config_path);
        opts.out_dir = out_dir;
        opts.strict = strict;
        fs::create_directories(opts.out_dir);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitUsage;
    } catch (const fs::filesystem_error& e) {
        std::fprintf(stderr, "cannot create output directory: %s\n", e.what());
        return kExitUsage;
    }

    try {
        return chosen->fn(cfg, opts);
    } catch (const mkdv::TailError& e) {
        std::fprintf(stderr, "numerical fault (tail): %s\n", e.what());
    } catch (const mkdv::EvolutionFault& e) {
        std::fprintf(stderr, "numerical fault: %s\n", e.what());
    } catch (const mkdv::FitError& e) {
        std::fprintf(stderr, "numerical fault: %s\n", e.what());
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid request: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical fault: %s\n", e.what());
    }
    return kExitFault;
}

}  // namespace bbench
