#pragma once

#include <cstdint>
#include <vector>

#include "sclab/control.hpp"
#include "sclab/rng.hpp"
#include "sclab/solver.hpp"

namespace sclab::kinetic {

using hyperbolic::Trajectory;

/// Uniform grid in the velocity variable xi.
struct XiGrid {
    double xi_min = -2.0;
    double xi_max = 2.0;
    int points = 16;  // nodes, endpoints included

    XiGrid() = default;
    XiGrid(double lo, double hi, int pts) : xi_min(lo), xi_max(hi), points(pts) {
        if (!(lo < hi)) throw std::invalid_argument("XiGrid: xi_min < xi_max required");
        if (pts < 16) throw std::invalid_argument("XiGrid: points >= 16 required");
    }
    double dxi() const { return (xi_max - xi_min) / (points - 1); }
    double node(int j) const { return xi_min + dxi() * j; }
    /// brackets range(u) with unit margin
    bool brackets(const Field& u) const {
        return xi_min <= u.min() - 1.0 && xi_max >= u.max() + 1.0;
    }
};

/// Indicator lift f(x, xi) = I_{u(x) > xi} on a XiGrid; the Young measure is
/// the Dirac at u(x).
struct KineticSnapshot {
    TorusGrid grid;
    XiGrid xi;
    std::vector<uint8_t> f;  // cell-major, xi.points per cell
    Field u_source;

    uint8_t at(std::size_t cell, int j) const {
        return f[cell * static_cast<std::size_t>(xi.points) + j];
    }
};

struct MeasureEntry {
    std::size_t cell;
    int time_index;
    double xi;
    double mass;
};

struct DiscreteKineticMeasure {
    std::vector<MeasureEntry> entries;
    double total_mass() const {
        double s = 0;
        for (const auto& e : entries) s += e.mass;
        return s;
    }
    /// mass outside |xi| <= R (the vanishing-tail diagnostic)
    double tail_mass(double R) const {
        double s = 0;
        for (const auto& e : entries)
            if (std::abs(e.xi) > R) s += e.mass;
        return s;
    }
};

KineticSnapshot kinetic_lift(const Field& u, const XiGrid& xi);

/// u(x) recovered from the lift: xi_min + sum_j f(x, xi_j) * dxi (exact up to
/// one xi cell).
Field reconstruct(const KineticSnapshot& snap);

struct SignedL1 {
    double pos;  // ||(u1 - u2)^+||_{L^1}, via f1 * (1 - f2)
    double neg;
};
SignedL1 l1_via_kinetic(const Field& u1, const Field& u2, const XiGrid& xi);

/// Discrete approximation-to-identity pair: rho_gamma on the torus grid
/// (per-axis offsets) and psi_delta on the xi spacing. Both nonnegative,
/// symmetric, normalized so the discrete integral is 1.
struct MollifierPair {
    double gamma, delta;
    double dx, dxi;
    std::vector<double> rho;  // values at offsets -m..m, length 2m+1
    std::vector<double> psi;  // same layout on the xi grid
    int rho_half() const { return (static_cast<int>(rho.size()) - 1) / 2; }
    int psi_half() const { return (static_cast<int>(psi.size()) - 1) / 2; }
};
MollifierPair mollifier_pair(double gamma, double delta, double dx, double dxi);

struct CostGuardError : std::runtime_error {
    explicit CostGuardError(const std::string& what) : std::runtime_error(what) {}
};

/// Mollified doubling-of-variables functional
///   integral of rho_gamma(x-y) psi_delta(xi-zeta) (f1 fbar2 + fbar1 f2).
/// Direct dense quadrature; refuses above the desk-scale budget.
double doubling_functional(const Field& u1, const Field& u2, double gamma, double delta,
                           const XiGrid& xi);

/// q^eta = eta |grad u|^2 delta_{u = xi}, cell by space-time cell, using the
/// same forward differences as the solver's dissipation record.
DiscreteKineticMeasure parabolic_kinetic_measure(const Trajectory& traj, double eta,
                                                 const XiGrid& xi);

/// Separable test function alpha(x) chi(xi): trigonometric in x, compactly
/// supported C^1 bump in xi with closed-form antiderivative.
struct TestFunctionSpec {
    int x_freq = 1;          // alpha(x) = cos(2 pi x_freq x_1)
    double chi_center = 0.0; // chi supported on |xi - center| < width
    double chi_width = 1.0;
};

/// Absolute weak-form residual of the heat-equation kinetic identity with
/// m = eta |grad u|^2 delta_{u=xi} and nu = delta_{u=xi}. The trajectory must
/// come from a zero-flux viscous run. For stochastic runs pass the driving
/// stream (seed/traj/eps) so the martingale term is included.
struct HeatResidualOptions {
    double eps = 0.0;
    uint64_t seed = 0;
    uint64_t traj = 0;
};
double heat_kinetic_residual(const Trajectory& traj, const NoiseModel& noise, double eta,
                             const TestFunctionSpec& phi, const XiGrid& xi,
                             const HeatResidualOptions& opt = {});

struct ContractionReport {
    double initial_l1;
    double max_l1;
    double ratio;       // max_t L1(t) / L1(0); 0 when initial data coincide
    double bound;       // e^{2 sqrt(D1) (T + M)}
    bool violated;
};
ContractionReport contraction_check(const Field& u0_a, const Field& u0_b, const Control& h,
                                    const FluxModel& flux, const NoiseModel& noise, double T,
                                    double M, const hyperbolic::SolverConfig& cfg = {});

}  // namespace sclab::kinetic
