#include "sclab/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "json.hpp"
#include "sclab/kinetic.hpp"
#include "sclab/ldp.hpp"
#include "sclab/stochastic.hpp"

namespace sclab::run {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

TorusGrid build_grid(const cfg::ExperimentSpec& spec) { return TorusGrid(spec.dim, spec.n); }

Field build_initial(const cfg::ExperimentSpec& spec) {
    Field u(build_grid(spec));
    if (spec.init_kind == "constant") {
        for (double& v : u.values) v = spec.init_value;
    } else if (spec.init_kind == "riemann") {
        // left state on [0, 1/2), right state on [1/2, 1), split along axis 0
        for (std::size_t c = 0; c < u.size(); ++c)
            u.values[c] = u.grid.center(c, 0) < 0.5 ? spec.init_left : spec.init_right;
    } else if (spec.init_kind == "cosine") {
        constexpr double two_pi = 6.283185307179586476925286766559;
        for (std::size_t c = 0; c < u.size(); ++c)
            u.values[c] = spec.init_value +
                          spec.init_amplitude * std::cos(two_pi * spec.init_freq * u.grid.center(c, 0));
    } else {
        throw std::invalid_argument("unknown initial kind '" + spec.init_kind + "'");
    }
    return u;
}

FluxModel build_flux(const cfg::ExperimentSpec& spec) {
    if (spec.flux_kind == "burgers") return FluxModel::burgers(spec.dim);
    if (spec.flux_kind == "linear") {
        std::vector<double> c = spec.linear_c;
        if (static_cast<int>(c.size()) == 1 && spec.dim == 2) c.push_back(c[0]);
        if (static_cast<int>(c.size()) != spec.dim)
            throw std::invalid_argument("linear flux needs one speed per axis");
        return FluxModel::linear(c);
    }
    if (spec.flux_kind == "polynomial") return FluxModel::polynomial(spec.poly_coeffs, spec.dim);
    if (spec.flux_kind == "zero")
        return FluxModel::linear(std::vector<double>(spec.dim, 0.0));
    throw std::invalid_argument("unknown flux kind '" + spec.flux_kind + "'");
}

NoiseModel build_noise(const cfg::ExperimentSpec& spec) {
    return NoiseModel::trigonometric(spec.K, spec.sigma, spec.q, spec.b0, spec.b1);
}

Control build_control(const cfg::ExperimentSpec& spec) {
    if (spec.control_kind == "zero") return Control::zero(spec.K, spec.T, spec.steps);
    if (spec.control_kind == "constant") {
        std::vector<double> level = spec.control_level;
        if (level.size() == 1 && spec.K > 1) level.assign(spec.K, level[0]);
        if (static_cast<int>(level.size()) != spec.K)
            throw std::invalid_argument("control level needs one entry per mode");
        return Control::constant(level, spec.T, spec.steps);
    }
    if (spec.control_kind == "file") {
        std::ifstream is(spec.control_file);
        if (!is) throw std::runtime_error("cannot open control file " + spec.control_file);
        Control h = Control::load_csv(is, spec.T);
        if (h.K() != spec.K)
            throw std::runtime_error("control file has " + std::to_string(h.K()) +
                                     " modes, noise has " + std::to_string(spec.K));
        return h;
    }
    throw std::invalid_argument("unknown control kind '" + spec.control_kind + "'");
}

hyperbolic::SolverConfig build_solver(const cfg::ExperimentSpec& spec) {
    hyperbolic::SolverConfig cfg;
    cfg.cfl = spec.cfl;
    cfg.scheme = spec.scheme == "godunov" ? hyperbolic::Scheme::Godunov
                                          : hyperbolic::Scheme::EngquistOsher;
    cfg.viscosity_eta = spec.eta;
    cfg.truncation_R = spec.R;
    return cfg;
}

namespace {

json spec_echo(const cfg::ExperimentSpec& s) {
    json j;
    j["name"] = s.name;
    j["task"] = s.task;
    j["seed"] = s.seed;
    j["grid"] = {{"dim", s.dim}, {"n", s.n}};
    j["flux"] = {{"kind", s.flux_kind}, {"c", s.linear_c}, {"coeffs", s.poly_coeffs}};
    j["noise"] = {{"K", s.K}, {"sigma", s.sigma}, {"q", s.q}, {"b0", s.b0}, {"b1", s.b1}};
    j["initial"] = {{"kind", s.init_kind},   {"left", s.init_left},
                    {"right", s.init_right}, {"value", s.init_value},
                    {"amplitude", s.init_amplitude}, {"freq", s.init_freq}};
    j["control"] = {{"kind", s.control_kind}, {"level", s.control_level},
                    {"file", s.control_file}};
    j["time"] = {{"T", s.T}, {"steps", s.steps}};
    j["solver"] = {{"cfl", s.cfl},
                   {"scheme", s.scheme},
                   {"eta", s.eta},
                   {"R", s.R ? json(*s.R) : json()},
                   {"eps", s.eps}};
    return j;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    os << text;
}

void write_snapshot(const fs::path& p, const Field& u) {
    std::string out = u.grid.dim == 1 ? "x1,u\n" : "x1,x2,u\n";
    for (std::size_t c = 0; c < u.size(); ++c) {
        out += fmt(u.grid.center(c, 0));
        if (u.grid.dim == 2) out += "," + fmt(u.grid.center(c, 1));
        out += "," + fmt(u.values[c]) + "\n";
    }
    write_text(p, out);
}

json write_trajectory(const fs::path& dir, const hyperbolic::Trajectory& traj) {
    json snaps = json::array();
    for (std::size_t i = 0; i < traj.fields.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "snap_%05zu.csv", i);
        write_snapshot(dir / name, traj.fields[i]);
        snaps.push_back({{"time", traj.times[i]}, {"file", name}});
    }
    return snaps;
}

struct TaskResult {
    int exit_code = 0;
    json extra;  // merged into the manifest
};

TaskResult task_solve(const cfg::ExperimentSpec& spec, const fs::path& dir) {
    Field u0 = build_initial(spec);
    FluxModel flux = build_flux(spec);
    NoiseModel noise = build_noise(spec);
    Control h = build_control(spec);
    auto cfg = build_solver(spec);

    hyperbolic::Trajectory traj;
    if (spec.task == "skeleton")
        traj = hyperbolic::solve_skeleton(u0, flux, noise, h, spec.T, cfg);
    else if (spec.task == "parabolic")
        traj = hyperbolic::solve_parabolic(u0, flux, noise, h, spec.T, spec.eta, spec.R, cfg);
    else
        traj = stochastic::solve_stochastic(u0, flux, noise, h, spec.eps, spec.T, cfg, spec.seed);

    TaskResult res;
    res.extra["snapshots"] = write_trajectory(dir, traj);
    res.extra["energy_sup_l2sq"] = traj.energy_sup_l2sq;
    res.extra["dissipation"] = traj.dissipation;
    return res;
}

TaskResult task_kinetic_check(const cfg::ExperimentSpec& spec, const fs::path& dir) {
    Field u0 = build_initial(spec);
    FluxModel flux = build_flux(spec);
    NoiseModel noise = build_noise(spec);
    Control h = build_control(spec);
    auto cfg = build_solver(spec);
    auto traj = hyperbolic::solve_parabolic(u0, flux, noise, h, spec.T, spec.eta, spec.R, cfg);

    kinetic::XiGrid xi(spec.xi_min, spec.xi_max, spec.xi_points);
    auto snap = kinetic::kinetic_lift(traj.fields.back(), xi);
    std::string lift = "x,xi,f\n";
    for (std::size_t c = 0; c < traj.fields.back().size(); ++c)
        for (int j = 0; j < xi.points; ++j)
            lift += fmt(snap.grid.center(c, 0)) + "," + fmt(xi.node(j)) + "," +
                    std::to_string(static_cast<int>(snap.at(c, j))) + "\n";
    write_text(dir / "kinetic.csv", lift);

    auto m = kinetic::parabolic_kinetic_measure(traj, spec.eta, xi);
    std::string meas = "x,t,xi,mass\n";
    for (const auto& e : m.entries)
        meas += fmt(traj.fields[0].grid.center(e.cell, 0)) + "," +
                fmt(traj.times[e.time_index]) + "," + fmt(e.xi) + "," + fmt(e.mass) + "\n";
    write_text(dir / "measure.csv", meas);

    TaskResult res;
    res.extra["measure_total_mass"] = m.total_mass();
    res.extra["measure_tail_mass"] = m.tail_mass(traj.fields.back().max_abs());
    res.extra["dissipation"] = traj.dissipation;
    if (spec.flux_kind == "zero") {
        kinetic::TestFunctionSpec tf;
        kinetic::HeatResidualOptions opt;
        opt.eps = spec.eps;
        opt.seed = spec.seed;
        res.extra["heat_residual"] =
            kinetic::heat_kinetic_residual(traj, noise, spec.eta, tf, xi, opt);
    }
    return res;
}

ldp::RareEvent build_event(const cfg::ExperimentSpec& spec) {
    ldp::RareEvent ev;
    ev.threshold = spec.event_threshold;
    if (spec.event_kind == "l1_ball_complement") {
        ev.kind = ldp::RareEvent::Kind::TerminalL1BallComplement;
        ev.reference = build_initial(spec);
    } else {
        ev.kind = ldp::RareEvent::Kind::TerminalMeanThreshold;
        ev.ref_scalar = spec.event_ref;
    }
    return ev;
}

std::string mc_table_csv(const ldp::MCTable& table) {
    std::string out = "eps,n_traj,hits,p_hat,ci_lo,ci_hi,minus_eps_log_p,usable\n";
    for (const auto& r : table.rows)
        out += fmt(r.eps) + "," + std::to_string(r.n_traj) + "," + std::to_string(r.hits) +
               "," + fmt(r.p_hat) + "," + fmt(r.ci_lo) + "," + fmt(r.ci_hi) + "," +
               (r.usable ? fmt(r.minus_eps_log_p) : std::string("nan")) + "," +
               (r.usable ? "1" : "0") + "\n";
    return out;
}

TaskResult task_mc(const cfg::ExperimentSpec& spec, const fs::path& dir, bool fit) {
    if (spec.eps_list.empty())
        throw std::runtime_error("[mc] eps_list is required for this task");
    Field u0 = build_initial(spec);
    FluxModel flux = build_flux(spec);
    NoiseModel noise = build_noise(spec);
    auto cfg = build_solver(spec);
    ldp::RareEvent ev = build_event(spec);

    std::vector<std::vector<ldp::MCTrajRecord>> records;
    auto table = ldp::mc_rare_event(u0, flux, noise, ev, spec.eps_list, spec.n_traj,
                                    spec.seed, spec.T, spec.steps, cfg, &records);
    write_text(dir / "mc.csv", mc_table_csv(table));

    std::string rows = "traj_id,seed,eps,final_l1_dist,event_flag\n";
    for (std::size_t e = 0; e < records.size(); ++e)
        for (const auto& r : records[e])
            rows += std::to_string(r.traj) + "," + std::to_string(r.seed) + "," +
                    fmt(spec.eps_list[e]) + "," + fmt(r.stat) + "," +
                    (r.hit ? "1" : "0") + "\n";
    write_text(dir / "trajectories.csv", rows);

    TaskResult res;
    if (fit) {
        auto rep = ldp::ldp_fit(table, spec.action_star);
        std::string out = "eps,value\n";
        for (std::size_t i = 0; i < rep.eps.size(); ++i)
            out += fmt(rep.eps[i]) + "," + fmt(rep.values[i]) + "\n";
        write_text(dir / "fit_points.csv", out);
        res.extra["fit"] = {{"limit", rep.limit},
                            {"monotone", rep.monotone},
                            {"ratio", rep.ratio},
                            {"action_star", spec.action_star}};
    }
    return res;
}

TaskResult task_minimize(const cfg::ExperimentSpec& spec, const fs::path& dir) {
    Field u0 = build_initial(spec);
    Field target = u0;
    for (double& v : target.values) v += spec.target_shift;
    FluxModel flux = build_flux(spec);
    NoiseModel noise = build_noise(spec);
    ldp::MinimizeOptions opt;
    opt.steps = spec.opt_steps;
    opt.solver = build_solver(spec);
    auto res = ldp::minimize_action(u0, target, spec.delta_target, flux, noise, spec.T, opt);

    std::ofstream os(dir / "optimal_control.csv", std::ios::binary);
    res.control.save_csv(os);
    write_text(dir / "result.csv",
               "action,terminal_gap,converged,iterations\n" + fmt(res.action) + "," +
                   fmt(res.terminal_gap) + "," + (res.converged ? "1" : "0") + "," +
                   std::to_string(res.iterations) + "\n");
    TaskResult out;
    out.extra["minimize"] = {{"action", res.action},
                             {"terminal_gap", res.terminal_gap},
                             {"converged", res.converged},
                             {"iterations", res.iterations}};
    if (!res.converged) out.exit_code = 2;
    return out;
}

TaskResult task_action(const cfg::ExperimentSpec& spec, const fs::path& dir) {
    Control h = build_control(spec);
    double a = ldp::action(h);
    write_text(dir / "action.csv", "action,norm_sq\n" + fmt(a) + "," + fmt(2 * a) + "\n");
    TaskResult res;
    res.extra["action"] = a;
    return res;
}

TaskResult task_cond_b(const cfg::ExperimentSpec& spec, const fs::path& dir) {
    if (spec.eps_list.empty())
        throw std::runtime_error("[condb] eps_list is required for this task");
    Field u0 = build_initial(spec);
    FluxModel flux = build_flux(spec);
    NoiseModel noise = build_noise(spec);
    Control h = build_control(spec);
    std::vector<Control> family(spec.eps_list.size(), h);
    auto rows = ldp::condition_b_gap(u0, flux, noise, family, spec.eps_list, spec.n_traj,
                                     spec.seed, spec.M, spec.delta, build_solver(spec));
    std::string out = "eps,mean_gap,exceed_frac\n";
    for (const auto& r : rows)
        out += fmt(r.eps) + "," + fmt(r.mean_gap) + "," + fmt(r.exceed_frac) + "\n";
    write_text(dir / "condb.csv", out);
    return {};
}

TaskResult task_weak_probe(const cfg::ExperimentSpec& spec, const fs::path& dir) {
    if (spec.eps_list.empty())
        throw std::runtime_error("[weakprobe] eps_list is required for this task");
    Field u0 = build_initial(spec);
    FluxModel flux = build_flux(spec);
    NoiseModel noise = build_noise(spec);
    Control h = build_control(spec);
    ldp::Oscillation osc{spec.osc_amplitude, spec.osc_mode - 1};
    auto rows = ldp::weak_continuity_probe(u0, flux, noise, h, osc, spec.eps_list, spec.M,
                                           build_solver(spec));
    std::string out = "eps,solution_gap,control_gap_sq\n";
    for (const auto& r : rows)
        out += fmt(r.eps) + "," + fmt(r.solution_gap) + "," + fmt(r.control_gap_sq) + "\n";
    write_text(dir / "weakprobe.csv", out);
    return {};
}

}  // namespace

int run_experiment(const cfg::ExperimentSpec& spec) {
    try {
        fs::path dir(spec.output_dir);
        fs::create_directories(dir);

        TaskResult res;
        if (spec.task == "solve" || spec.task == "skeleton" || spec.task == "parabolic")
            res = task_solve(spec, dir);
        else if (spec.task == "kinetic-check")
            res = task_kinetic_check(spec, dir);
        else if (spec.task == "mc")
            res = task_mc(spec, dir, false);
        else if (spec.task == "ldp-fit")
            res = task_mc(spec, dir, true);
        else if (spec.task == "minimize")
            res = task_minimize(spec, dir);
        else if (spec.task == "action")
            res = task_action(spec, dir);
        else if (spec.task == "cond-b")
            res = task_cond_b(spec, dir);
        else if (spec.task == "weak-probe")
            res = task_weak_probe(spec, dir);
        else
            throw std::runtime_error("unknown task '" + spec.task + "'");

        json manifest;
        manifest["version"] = kVersion;
        manifest["spec"] = spec_echo(spec);
        for (auto& [k, v] : res.extra.items()) manifest[k] = v;
        write_text(dir / "manifest.json", manifest.dump(2) + "\n");
        return res.exit_code;
    } catch (const ldp::InsufficientDataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace sclab::run
