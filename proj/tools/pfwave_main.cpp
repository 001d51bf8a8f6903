// Command-line front end: reduction reports, wave-profile construction,
// time-dependent simulations, and the model-comparison matrix.
//
// Exit codes: 0 success, 2 invalid elastic system, 3 no wave connecting the
// minima (gate failed), 4 numerical blowup, 1 anything else.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pfwave/analysis.hpp"
#include "pfwave/config.hpp"
#include "pfwave/elastic.hpp"
#include "pfwave/io.hpp"
#include "pfwave/pde.hpp"
#include "pfwave/potential.hpp"
#include "pfwave/profile.hpp"

namespace {

using namespace pfwave;
namespace fs = std::filesystem;
using nlohmann::json;

struct CliFlags {
    std::optional<std::string> config;
    std::optional<std::string> out;
    std::optional<int> jobs;
    std::optional<double> dx, dt, L, t_end, mu, delta;
    std::optional<std::string> model, potential;
};

void add_common_flags(CLI::App* cmd, CliFlags& f) {
    cmd->add_option("--config", f.config, "config file (key = value lines, or flat JSON)");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--jobs", f.jobs, "worker threads for compare");
    cmd->add_option("--dx", f.dx, "grid spacing");
    cmd->add_option("--dt", f.dt, "time step (default: half the stability bound)");
    cmd->add_option("--L", f.L, "domain half-width");
    cmd->add_option("--t-end", f.t_end, "final time");
    cmd->add_option("--mu", f.mu, "driving constant mu = alpha*T11 + beta");
    cmd->add_option("--model", f.model,
                    "modified_ac | modified_ch | classic_ac | classic_ch");
    cmd->add_option("--potential", f.potential,
                    "quartic | sextic_m1_2 | tilted_quartic <t> | poly c0,c1,...");
    cmd->add_option("--delta", f.delta, "mobility smoothing delta");
}

RunConfig load_config(const CliFlags& f) {
    RunConfig cfg = f.config ? RunConfig::parse_file(*f.config) : RunConfig{};
    // flags win over config values
    if (f.out) cfg.out = f.out;
    if (f.jobs) cfg.jobs = f.jobs;
    if (f.dx) cfg.dx = f.dx;
    if (f.dt) cfg.dt = f.dt;
    if (f.L) cfg.L = f.L;
    if (f.t_end) cfg.t_end = f.t_end;
    if (f.mu) {
        cfg.mu = f.mu;
        cfg.alpha.reset();
        cfg.beta.reset();
        cfg.D.reset();
    }
    if (f.model) cfg.model = f.model;
    if (f.potential) {
        cfg.potential = f.potential;
        cfg.poly.reset();
    }
    if (f.delta) cfg.delta = f.delta;
    cfg.validate();
    return cfg;
}

fs::path ensure_out_dir(const RunConfig& cfg) {
    const fs::path dir = cfg.out.value_or(".");
    fs::create_directories(dir);
    return dir;
}

int cmd_reduce(const CliFlags& flags) {
    RunConfig cfg;
    try {
        cfg = load_config(flags);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    const auto sys = cfg.make_elastic_system();
    if (!sys) {
        std::cerr << "config error: 'reduce' needs an elastic system (keys n, D, eps0, eps1)\n";
        return 2;
    }
    const ValidationReport rep = validate(*sys);
    json j;
    j["valid"] = rep.valid;
    j["c"] = rep.smallest_eigenvalue;
    j["d1111"] = rep.d1111;
    j["minor_symmetry_residual"] = rep.minor_symmetry_residual;
    j["major_symmetry_residual"] = rep.major_symmetry_residual;
    if (!rep.valid) {
        j["failures"] = rep.failures;
        std::cerr << j.dump(2) << "\n";
        return 2;
    }
    const auto a1 = check_a1(*sys);
    const double a2 = check_a2(*sys);
    double a1_max = 0.0;
    for (double r : a1) a1_max = std::max(a1_max, std::abs(r));
    j["a1_residual"] = a1;
    j["a2_residual"] = a2;
    j["a1_ok"] = a1_max <= 1e-12;
    j["a2_ok"] = std::abs(a2) <= 1e-12;
    const ReducedCoefficients rc = reduce(*sys);
    j["alpha"] = rc.alpha;
    j["beta"] = rc.beta;
    j["gamma"] = rc.gamma;
    if (cfg.potential || cfg.poly) {
        const DoubleWell well = cfg.make_well();
        j["jump_w"] = displacement_gradient_jump(*sys, well.v_minus(), well.v_plus());
    } else {
        j["jump_w"] = nullptr;
    }
    const fs::path dir = ensure_out_dir(cfg);
    write_json(j, (dir / "reduce.json").string());
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_profile(const CliFlags& flags) {
    const RunConfig cfg = load_config(flags);
    const DoubleWell well = cfg.make_well();
    well.require_equal_wells(); // UnequalWells -> exit 3 via the dispatcher

    const ModelKind kind = model_kind_from_string(cfg.model.value_or("modified_ac"));
    const double mu = cfg.resolve_mu();
    const WaveFamily family = family_of(kind);
    const double speed = wave_speed(mu, well, family);
    const double half_width = cfg.half_width.value_or(10.0);
    const double pdx = cfg.profile_dx.value_or(cfg.dx.value_or(1e-3));

    ProfileOptions opts;
    opts.speed = speed;
    const WaveProfile profile = solve_profile(well, half_width, pdx, family, opts);

    DecayFitOptions fit_opts;
    if (cfg.gap_lo) fit_opts.gap_lo = *cfg.gap_lo;
    if (cfg.gap_hi) fit_opts.gap_hi = *cfg.gap_hi;
    const auto [plus_fit, minus_fit] = fit_decay_rates(profile, well, fit_opts);

    const fs::path dir = ensure_out_dir(cfg);
    write_profile_csv(profile, (dir / "profile.csv").string());
    write_json(json::array({decay_fit_json(plus_fit), decay_fit_json(minus_fit)}),
               (dir / "decay.json").string());

    json manifest;
    manifest["potential"] = cfg.potential_spec();
    manifest["model"] = to_string(kind);
    manifest["mu"] = mu;
    manifest["half_width"] = half_width;
    manifest["profile_dx"] = pdx;
    manifest["gap_lo"] = fit_opts.gap_lo;
    manifest["gap_hi"] = fit_opts.gap_hi;
    manifest["seed"] = cfg.seed.value_or(0);
    write_json(manifest, (dir / "manifest.json").string());

    std::cout << "profile: " << profile.xi.size() << " nodes on [" << profile.xi_min() << ", "
              << profile.xi_max() << "], s = " << fmt17(speed) << "\n";
    return 0;
}

int cmd_simulate(const CliFlags& flags) {
    const RunConfig cfg = load_config(flags);
    auto well = std::make_shared<const DoubleWell>(cfg.make_well());
    well->require_equal_wells();

    const ModelKind kind = model_kind_from_string(cfg.model.value_or("modified_ac"));
    const double mu = cfg.resolve_mu();
    const double delta = cfg.delta.value_or(0.0);
    const double L = cfg.L.value_or(20.0);
    const double dx = cfg.dx.value_or(is_conserved(kind) ? 0.1 : 0.02);
    const double t_end = cfg.t_end.value_or(10.0);
    const double snapshot_every = cfg.snapshot_every.value_or(t_end / 40.0);
    const double half_width = cfg.half_width.value_or(std::max(L - 5.0, 5.0));
    const double pdx = cfg.profile_dx.value_or(2e-3);

    const Model model = Model::make(kind, mu, delta);
    const WaveProfile profile = solve_profile(*well, half_width, pdx, family_of(kind));
    SimState state = init_from_profile(profile, well, L, dx, model, cfg.dt.value_or(0.0));
    const double dt = state.dt();
    const Trajectory traj = run(state, t_end, snapshot_every);

    const fs::path dir = ensure_out_dir(cfg);
    write_snapshots_csv(traj, (dir / "snapshots.csv").string());
    write_trajectory_csv(traj, state, well->v_star(), (dir / "trajectory.csv").string());
    try {
        const SpeedFit fit = measure_speed(traj, well->v_star(), predicted_speed(kind, mu));
        write_json(speed_fit_json(fit), (dir / "speedfit.json").string());
    } catch (const std::exception&) {
        // no measurable front (too few snapshots or no single crossing)
    }

    json manifest;
    manifest["model"] = to_string(kind);
    manifest["mu"] = mu;
    manifest["delta"] = delta;
    manifest["L"] = L;
    manifest["dx"] = dx;
    manifest["dt"] = dt;
    manifest["t_end"] = t_end;
    manifest["snapshot_every"] = snapshot_every;
    manifest["bc"] = to_string(state.bc().tag);
    manifest["potential"] = cfg.potential_spec();
    manifest["half_width"] = half_width;
    manifest["profile_dx"] = pdx;
    manifest["seed"] = cfg.seed.value_or(0);
    write_json(manifest, (dir / "manifest.json").string());

    std::cout << "simulate: " << to_string(kind) << ", mu = " << mu << ", t_end = " << t_end
              << ", dt = " << fmt17(dt) << ", overshoot = " << fmt17(traj.overshoot_max) << "\n";
    return 0;
}

int cmd_compare(const CliFlags& flags) {
    const RunConfig cfg = load_config(flags);
    CompareConfig cc;
    cc.well = cfg.make_well();
    if (cfg.mus) cc.mus = *cfg.mus;
    if (cfg.ac_L) cc.ac_L = *cfg.ac_L;
    if (cfg.ac_dx) cc.ac_dx = *cfg.ac_dx;
    if (cfg.ac_t_end) cc.ac_t_end = *cfg.ac_t_end;
    if (cfg.ac_snapshot) cc.ac_snapshot = *cfg.ac_snapshot;
    if (cfg.ch_L) cc.ch_L = *cfg.ch_L;
    if (cfg.ch_dx) cc.ch_dx = *cfg.ch_dx;
    if (cfg.ch_t_end) cc.ch_t_end = *cfg.ch_t_end;
    if (cfg.ch_snapshot) cc.ch_snapshot = *cfg.ch_snapshot;
    if (cfg.pad_margin) cc.pad_margin = *cfg.pad_margin;
    if (cfg.profile_dx) cc.profile_dx = *cfg.profile_dx;
    if (cfg.delta) cc.delta = *cfg.delta;
    cc.jobs = cfg.jobs.value_or(1);

    const auto rows = run_comparison_matrix(cc);

    const fs::path dir = ensure_out_dir(cfg);
    write_comparison_csv(rows, (dir / "comparison.csv").string());

    json manifest;
    manifest["potential"] = cfg.potential_spec();
    manifest["mus"] = cc.mus;
    manifest["ac_L"] = cc.ac_L;
    manifest["ac_dx"] = cc.ac_dx;
    manifest["ac_t_end"] = cc.ac_t_end;
    manifest["ac_snapshot"] = cc.ac_snapshot;
    manifest["ch_L"] = cc.ch_L;
    manifest["ch_dx"] = cc.ch_dx;
    manifest["ch_t_end"] = cc.ch_t_end;
    manifest["ch_snapshot"] = cc.ch_snapshot;
    manifest["pad_margin"] = cc.pad_margin;
    manifest["profile_dx"] = cc.profile_dx;
    manifest["delta"] = cc.delta;
    manifest["seed"] = cfg.seed.value_or(0);
    write_json(manifest, (dir / "manifest.json").string());

    for (const auto& r : rows)
        std::cout << to_string(r.model) << " mu=" << r.mu
                  << (r.front_exists ? "  front" : "  no-front")
                  << "  s=" << fmt17(r.s_measured) << "  drift=" << fmt17(r.tail_drift) << "\n";
    return 0;
}

template <typename F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const UnequalWells& e) {
        std::cerr << "no wave exists: " << e.what() << " (gap = " << fmt17(e.gap) << ")\n";
        return 3;
    } catch (const Blowup& e) {
        std::cerr << "blowup: " << e.what() << " at t = " << fmt17(e.time) << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pfwave: 1D phase-field wave construction, simulation, and analysis"};
    app.require_subcommand(1);

    CliFlags reduce_flags, profile_flags, simulate_flags, compare_flags;
    CLI::App* reduce = app.add_subcommand("reduce", "validate an elastic system and reduce it");
    add_common_flags(reduce, reduce_flags);
    CLI::App* profile = app.add_subcommand("profile", "construct a wave profile and decay fits");
    add_common_flags(profile, profile_flags);
    CLI::App* simulate = app.add_subcommand("simulate", "run one time-dependent simulation");
    add_common_flags(simulate, simulate_flags);
    CLI::App* compare = app.add_subcommand("compare", "run the model-comparison matrix");
    add_common_flags(compare, compare_flags);

    CLI11_PARSE(app, argc, argv);

    // reduce maps its own config/validation failures to exit 2 internally
    if (reduce->parsed()) return guarded([&] { return cmd_reduce(reduce_flags); });
    if (profile->parsed()) return guarded([&] { return cmd_profile(profile_flags); });
    if (simulate->parsed()) return guarded([&] { return cmd_simulate(simulate_flags); });
    if (compare->parsed()) return guarded([&] { return cmd_compare(compare_flags); });
    return 1;
}
