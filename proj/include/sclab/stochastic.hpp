#pragma once

#include <cstdint>

#include "sclab/rng.hpp"
#include "sclab/solver.hpp"

namespace sclab::stochastic {

using hyperbolic::SolverConfig;
using hyperbolic::Trajectory;

/// One Euler-Maruyama step of the shifted equation: flux step, then
/// u += dt * sum_k g_k h^k + sqrt(eps) * sum_k g_k dW_k.
/// With eps == 0 this is bitwise identical to step_skeleton.
Field step_controlled(const Field& u, const FluxModel& flux, const NoiseModel& noise,
                      const std::vector<double>& h_at_t, double eps,
                      const std::vector<double>& dW, double dt,
                      const SolverConfig& cfg = {});

/// Small-noise equation (or, with a nonzero control, the shifted equation):
/// full trajectory driven by the (seed, traj) Wiener stream.
Trajectory solve_stochastic(const Field& u0, const FluxModel& flux, const NoiseModel& noise,
                            const Control& h, double eps, double T,
                            const SolverConfig& cfg, uint64_t seed, uint64_t traj = 0);

/// Final snapshot only; identical dynamics, no trajectory storage (used by
/// the Monte Carlo driver).
Field solve_stochastic_final(const Field& u0, const FluxModel& flux, const NoiseModel& noise,
                             const Control& h, double eps, double T,
                             const SolverConfig& cfg, uint64_t seed, uint64_t traj = 0);

}  // namespace sclab::stochastic
