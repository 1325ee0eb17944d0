#pragma once

#include "sclab/solver.hpp"

// Shared explicit-step kernel for the skeleton, parabolic and stochastic
// steppers. Not part of the public surface.
namespace sclab::hyperbolic::detail {

struct StepWorkspace {
    std::vector<double> flux_line;  // interface fluxes, one axis at a time
    std::vector<double> scratch;
};

// One full step of
//   u <- u - dt * div_h F(u) + dt * eta * Lap_h u
//        + dt * sum_k g_k(x,u_pre) h_k + sqrt_eps * sum_k g_k(x,u_pre) dW_k
// g_k is evaluated at the field value before the flux update. h and dW may
// be null (treated as zero). Throws StabilityError / BlowupError.
// Returns the forward-difference gradient energy sum_x |grad u_pre|^2 dx
// (used for the viscous dissipation record).
double step_inplace(Field& u, const FluxModel& flux, Scheme scheme, double eta,
                    const NoiseTable* noise, const double* h, const double* dW,
                    double sqrt_eps, double dt, double cfl, StepWorkspace& ws);

}  // namespace sclab::hyperbolic::detail
