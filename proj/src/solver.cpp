#include "sclab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sclab/detail/step_kernel.hpp"

namespace sclab::hyperbolic {

namespace {

// exact integral of max(a,0) resp. min(a,0) from 0 to v, by splitting at the
// zeros of a; each monotone-sign piece integrates to a difference of A
double eo_split_integral(const FluxModel& flux, int axis, double v, bool positive_part) {
    if (v == 0.0) return 0.0;
    double lo = std::min(0.0, v), hi = std::max(0.0, v);
    std::vector<double> nodes = flux.critical_points(axis, lo, hi);
    nodes.insert(nodes.begin(), lo);
    nodes.push_back(hi);
    double sum = 0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        double mid = 0.5 * (nodes[i] + nodes[i + 1]);
        double slope = flux.deriv(axis, mid);
        if ((positive_part && slope > 0) || (!positive_part && slope < 0))
            sum += flux.value(axis, nodes[i + 1]) - flux.value(axis, nodes[i]);
    }
    return v > 0 ? sum : -sum;
}

double godunov_generic(const FluxModel& flux, int axis, double uL, double uR) {
    double lo = std::min(uL, uR), hi = std::max(uL, uR);
    std::vector<double> cand = flux.critical_points(axis, lo, hi);
    cand.push_back(uL);
    cand.push_back(uR);
    double best = flux.value(axis, cand[0]);
    for (double c : cand) {
        double v = flux.value(axis, c);
        if (uL <= uR ? v < best : v > best) best = v;
    }
    return best;
}

}  // namespace

double numerical_flux(const FluxModel& flux, Scheme scheme, double uL, double uR, int axis) {
    if (flux.kind() == FluxKind::Linear && !flux.truncation_R()) {
        double c = flux.deriv(axis, 0.0);
        return c >= 0 ? c * uL : c * uR;
    }
    if (flux.kind() == FluxKind::Burgers && !flux.truncation_R()) {
        if (scheme == Scheme::EngquistOsher) {
            double p = std::max(uL, 0.0), m = std::min(uR, 0.0);
            return 0.5 * (p * p + m * m);
        }
        // Godunov, exact Riemann for the convex flux u^2/2
        if (uL <= uR) {
            if (uL > 0) return 0.5 * uL * uL;
            if (uR < 0) return 0.5 * uR * uR;
            return 0.0;  // transonic rarefaction
        }
        double s = 0.5 * (uL + uR);  // shock speed
        return s > 0 ? 0.5 * uL * uL : 0.5 * uR * uR;
    }
    if (scheme == Scheme::EngquistOsher) {
        return flux.value(axis, 0.0) + eo_split_integral(flux, axis, uL, true) +
               eo_split_integral(flux, axis, uR, false);
    }
    return godunov_generic(flux, axis, uL, uR);
}

double admissible_dt(const Field& u, const FluxModel& flux, const SolverConfig& cfg,
                     double eta) {
    double dx = u.grid.cell_width();
    double dt = std::numeric_limits<double>::infinity();
    double speed = 0;
    switch (flux.kind()) {
        case FluxKind::Burgers: {
            double m = std::max(std::abs(u.min()), std::abs(u.max()));
            if (flux.truncation_R()) m = std::min(m, *flux.truncation_R());
            speed = m * flux.dim();
            break;
        }
        case FluxKind::Linear: {
            for (int ax = 0; ax < flux.dim(); ++ax) speed += std::abs(flux.deriv(ax, 0.0));
            break;
        }
        case FluxKind::Polynomial:
            speed = flux.dim() * flux.max_wave_speed(u.min(), u.max());
            break;
    }
    if (speed > 0) dt = cfg.cfl * dx / speed;
    if (eta > 0) dt = std::min(dt, cfg.cfl * dx * dx / (2.0 * u.grid.dim * eta));
    return dt;
}

namespace detail {

double step_inplace(Field& u, const FluxModel& flux, Scheme scheme, double eta,
                    const NoiseTable* noise, const double* h, const double* dW,
                    double sqrt_eps, double dt, double cfl, StepWorkspace& ws) {
    const TorusGrid& g = u.grid;
    const std::size_t n = u.size();
    const double dx = g.cell_width();
    const double inv_dx = 1.0 / dx;

    SolverConfig cfg;
    cfg.cfl = cfl;
    double adm = admissible_dt(u, flux, cfg, eta);
    if (dt > adm * (1.0 + 1e-9)) throw StabilityError(dt, adm);

    ws.scratch.assign(u.values.begin(), u.values.end());
    const std::vector<double>& pre = ws.scratch;

    double grad_energy = 0.0;

    // conservative flux differences, dimension by dimension
    for (int ax = 0; ax < g.dim; ++ax) {
        // interface i+1/2 along this axis for every cell
        ws.flux_line.resize(n);
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t r = g.neighbor(c, ax, 1);
            ws.flux_line[c] = numerical_flux(flux, scheme, pre[c], pre[r], ax);
        }
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t l = g.neighbor(c, ax, -1);
            u.values[c] -= dt * inv_dx * (ws.flux_line[c] - ws.flux_line[l]);
        }
    }

    if (eta > 0) {
        double inv_dx2 = inv_dx * inv_dx;
        double cellvol = g.cell_volume();
        for (std::size_t c = 0; c < n; ++c) {
            double lap = 0;
            for (int ax = 0; ax < g.dim; ++ax) {
                double up = pre[g.neighbor(c, ax, 1)];
                double dn = pre[g.neighbor(c, ax, -1)];
                lap += (up - 2.0 * pre[c] + dn) * inv_dx2;
                double fwd = (up - pre[c]) * inv_dx;
                grad_energy += fwd * fwd * cellvol;
            }
            u.values[c] += dt * eta * lap;
        }
    }

    if (noise && (h || (dW && sqrt_eps > 0))) {
        for (int k = 0; k < noise->K(); ++k) {
            double ck = (h ? dt * h[k] : 0.0) + (dW && sqrt_eps > 0 ? sqrt_eps * dW[k] : 0.0);
            if (ck == 0.0) continue;
            const double* add = noise->add[k].data();
            const double* mul = noise->mult[k].data();
            for (std::size_t c = 0; c < n; ++c)
                u.values[c] += ck * (add[c] + mul[c] * pre[c]);
        }
    }

    double m = u.max_abs();
    if (!(m <= 1e6)) throw BlowupError(m);
    return grad_energy;
}

}  // namespace detail

namespace {

Field step_once(const Field& u, const FluxModel& flux, const NoiseModel& noise,
                const std::vector<double>& h_at_t, double eta, std::optional<double> R,
                double dt, const SolverConfig& cfg) {
    if (!h_at_t.empty() && static_cast<int>(h_at_t.size()) != noise.K())
        throw std::invalid_argument("step: control vector length must equal K");
    FluxModel f = R ? flux.truncated(*R) : flux;
    NoiseTable tab(noise, u.grid);
    Field out = u;
    detail::StepWorkspace ws;
    detail::step_inplace(out, f, cfg.scheme, eta, &tab,
                         h_at_t.empty() ? nullptr : h_at_t.data(), nullptr, 0.0, dt,
                         cfg.cfl, ws);
    return out;
}

Trajectory solve_impl(const Field& u0, const FluxModel& flux_in, const NoiseModel& noise,
                      const Control& h, double T, double eta, std::optional<double> R,
                      const SolverConfig& cfg) {
    if (!u0.all_finite()) throw std::invalid_argument("solve: initial datum not finite");
    if (std::abs(h.T() - T) > 1e-12 * std::max(1.0, T))
        throw std::invalid_argument("solve: control horizon does not match T");
    FluxModel flux = R ? flux_in.truncated(*R) : flux_in;
    NoiseTable tab(noise, u0.grid);
    int steps = h.steps();
    double dt = T / steps;

    Trajectory traj;
    traj.config = cfg;
    traj.config.viscosity_eta = eta;
    traj.config.truncation_R = R;
    traj.times.reserve(steps + 1);
    traj.fields.reserve(steps + 1);
    traj.times.push_back(0.0);
    traj.fields.push_back(u0);
    traj.energy_sup_l2sq = l2_norm_sq(u0);

    Field u = u0;
    detail::StepWorkspace ws;
    for (int j = 0; j < steps; ++j) {
        double ge = detail::step_inplace(u, flux, cfg.scheme, eta, &tab, h.step_value(j),
                                         nullptr, 0.0, dt, cfg.cfl, ws);
        traj.dissipation += eta * ge * dt;
        traj.energy_sup_l2sq = std::max(traj.energy_sup_l2sq, l2_norm_sq(u));
        traj.times.push_back(dt * (j + 1));
        traj.fields.push_back(u);
    }
    return traj;
}

}  // namespace

Field step_skeleton(const Field& u, const FluxModel& flux, const NoiseModel& noise,
                    const std::vector<double>& h_at_t, double dt, const SolverConfig& cfg) {
    return step_once(u, flux, noise, h_at_t, 0.0, std::nullopt, dt, cfg);
}

Field step_parabolic(const Field& u, const FluxModel& flux, const NoiseModel& noise,
                     const std::vector<double>& h_at_t, double eta, std::optional<double> R,
                     double dt, const SolverConfig& cfg) {
    return step_once(u, flux, noise, h_at_t, eta, R, dt, cfg);
}

Trajectory solve_skeleton(const Field& u0, const FluxModel& flux, const NoiseModel& noise,
                          const Control& h, double T, const SolverConfig& cfg) {
    return solve_impl(u0, flux, noise, h, T, 0.0, std::nullopt, cfg);
}

Trajectory solve_parabolic(const Field& u0, const FluxModel& flux, const NoiseModel& noise,
                           const Control& h, double T, double eta, std::optional<double> R,
                           const SolverConfig& cfg) {
    if (eta < 0) throw std::invalid_argument("solve_parabolic: eta >= 0 required");
    return solve_impl(u0, flux, noise, h, T, eta, R, cfg);
}

double l1l1_distance(const Trajectory& a, const Trajectory& b) {
    if (a.times.size() != b.times.size())
        throw std::invalid_argument("l1l1_distance: time grids differ");
    double sum = 0;
    for (std::size_t i = 1; i < a.times.size(); ++i) {
        double dt = a.times[i] - a.times[i - 1];
        sum += dt * l1_distance(a.fields[i], b.fields[i]);
    }
    return sum;
}

}  // namespace sclab::hyperbolic
