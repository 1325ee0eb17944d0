#include "sclab/stochastic.hpp"

#include <cmath>

#include "sclab/detail/step_kernel.hpp"

namespace sclab::stochastic {

using hyperbolic::detail::step_inplace;
using hyperbolic::detail::StepWorkspace;

Field step_controlled(const Field& u, const FluxModel& flux, const NoiseModel& noise,
                      const std::vector<double>& h_at_t, double eps,
                      const std::vector<double>& dW, double dt, const SolverConfig& cfg) {
    if (eps < 0) throw std::invalid_argument("step_controlled: eps >= 0 required");
    if (!h_at_t.empty() && static_cast<int>(h_at_t.size()) != noise.K())
        throw std::invalid_argument("step_controlled: control vector length must equal K");
    if (eps > 0 && static_cast<int>(dW.size()) != noise.K())
        throw std::invalid_argument("step_controlled: dW length must equal K");
    NoiseTable tab(noise, u.grid);
    Field out = u;
    StepWorkspace ws;
    step_inplace(out, flux, cfg.scheme, cfg.viscosity_eta, &tab,
                 h_at_t.empty() ? nullptr : h_at_t.data(),
                 eps > 0 ? dW.data() : nullptr, eps > 0 ? std::sqrt(eps) : 0.0, dt,
                 cfg.cfl, ws);
    return out;
}

namespace {

template <typename Snapshot>
Field run(const Field& u0, const FluxModel& flux, const NoiseModel& noise, const Control& h,
          double eps, double T, const SolverConfig& cfg, uint64_t seed, uint64_t traj,
          Snapshot&& snapshot) {
    if (!u0.all_finite()) throw std::invalid_argument("solve_stochastic: initial datum not finite");
    if (std::abs(h.T() - T) > 1e-12 * std::max(1.0, T))
        throw std::invalid_argument("solve_stochastic: control horizon does not match T");
    NoiseTable tab(noise, u0.grid);
    int steps = h.steps();
    double dt = T / steps;
    double sqrt_eps = eps > 0 ? std::sqrt(eps) : 0.0;
    double sqrt_dt = std::sqrt(dt);

    Field u = u0;
    StepWorkspace ws;
    std::vector<double> dW(noise.K(), 0.0);
    snapshot(0, u);
    for (int j = 0; j < steps; ++j) {
        if (eps > 0)
            for (int k = 0; k < noise.K(); ++k)
                dW[k] = sqrt_dt * philox::normal(seed, traj, static_cast<uint32_t>(j),
                                                 static_cast<uint32_t>(k));
        step_inplace(u, flux, cfg.scheme, cfg.viscosity_eta, &tab, h.step_value(j),
                     eps > 0 ? dW.data() : nullptr, sqrt_eps, dt, cfg.cfl, ws);
        snapshot(j + 1, u);
    }
    return u;
}

}  // namespace

Trajectory solve_stochastic(const Field& u0, const FluxModel& flux, const NoiseModel& noise,
                            const Control& h, double eps, double T, const SolverConfig& cfg,
                            uint64_t seed, uint64_t traj) {
    Trajectory out;
    out.config = cfg;
    double dt = T / h.steps();
    run(u0, flux, noise, h, eps, T, cfg, seed, traj, [&](int j, const Field& u) {
        out.times.push_back(dt * j);
        out.fields.push_back(u);
        out.energy_sup_l2sq = std::max(out.energy_sup_l2sq, l2_norm_sq(u));
    });
    return out;
}

Field solve_stochastic_final(const Field& u0, const FluxModel& flux, const NoiseModel& noise,
                             const Control& h, double eps, double T, const SolverConfig& cfg,
                             uint64_t seed, uint64_t traj) {
    return run(u0, flux, noise, h, eps, T, cfg, seed, traj, [](int, const Field&) {});
}

}  // namespace sclab::stochastic
