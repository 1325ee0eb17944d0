#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sclab/control.hpp"
#include "sclab/flux.hpp"
#include "sclab/models.hpp"
#include "sclab/noise.hpp"

namespace sclab::hyperbolic {

enum class Scheme { EngquistOsher, Godunov };

struct SolverConfig {
    double cfl = 0.45;  // in (0, 1]
    Scheme scheme = Scheme::EngquistOsher;
    double viscosity_eta = 0.0;
    std::optional<double> truncation_R;
};

struct StabilityError : std::runtime_error {
    StabilityError(double requested, double admissible)
        : std::runtime_error("CFL violation: dt=" + std::to_string(requested) +
                             " exceeds admissible dt=" + std::to_string(admissible)),
          admissible_dt(admissible) {}
    double admissible_dt;
};

struct BlowupError : std::runtime_error {
    explicit BlowupError(double m)
        : std::runtime_error("solution blow-up: max|u|=" + std::to_string(m) +
                             " exceeds 1e6") {}
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Field> fields;
    SolverConfig config;
    double energy_sup_l2sq = 0.0;   // sup_t ||u||_{L^2}^2
    double dissipation = 0.0;       // eta * int_0^T ||grad u||_{L^2}^2 dt (forward diffs)

    const Field& final_field() const { return fields.back(); }
};

/// Largest stable dt for field u under cfg (hyperbolic and, if eta > 0,
/// diffusive constraint).
double admissible_dt(const Field& u, const FluxModel& flux, const SolverConfig& cfg,
                     double eta);

/// Monotone two-point flux on one axis: Engquist-Osher or Godunov.
/// Consistent (F(u,u) = A(u)), nondecreasing in u_left, nonincreasing in u_right.
double numerical_flux(const FluxModel& flux, Scheme scheme, double u_left, double u_right,
                      int axis);

/// One explicit skeleton step: conservative flux differences, then the
/// control source u += dt * sum_k g_k(x, u) h^k.
Field step_skeleton(const Field& u, const FluxModel& flux, const NoiseModel& noise,
                    const std::vector<double>& h_at_t, double dt,
                    const SolverConfig& cfg = {});

/// Skeleton step plus explicit centered Laplacian eta * Lap(u) * dt; if R is
/// given the flux is replaced by its truncation.
Field step_parabolic(const Field& u, const FluxModel& flux, const NoiseModel& noise,
                     const std::vector<double>& h_at_t, double eta,
                     std::optional<double> R, double dt, const SolverConfig& cfg = {});

/// Full trajectory of the controlled deterministic equation; this is the
/// discrete solution map G0 applied to h.
Trajectory solve_skeleton(const Field& u0, const FluxModel& flux, const NoiseModel& noise,
                          const Control& h, double T, const SolverConfig& cfg = {});

Trajectory solve_parabolic(const Field& u0, const FluxModel& flux, const NoiseModel& noise,
                           const Control& h, double T, double eta, std::optional<double> R,
                           const SolverConfig& cfg = {});

/// L^1([0,T]; L^1) distance of two trajectories on the same time grid.
double l1l1_distance(const Trajectory& a, const Trajectory& b);

}  // namespace sclab::hyperbolic
