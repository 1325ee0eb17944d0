#pragma once

#include <cstdint>
#include <vector>

#include "sclab/control.hpp"
#include "sclab/solver.hpp"
#include "sclab/stochastic.hpp"

namespace sclab::ldp {

using hyperbolic::SolverConfig;

/// Rare event decided from the final snapshot of a trajectory.
struct RareEvent {
    enum class Kind { TerminalL1BallComplement, TerminalMeanThreshold };
    Kind kind = Kind::TerminalMeanThreshold;
    Field reference;          // L1-ball center (ball-complement events)
    double ref_scalar = 0.0;  // mean offset (threshold events)
    double threshold = 0.0;   // delta_ev > 0

    /// L1 distance to the reference field, or mean offset past ref_scalar.
    double statistic(const Field& u_final) const;
    bool occurs(const Field& u_final) const { return statistic(u_final) >= threshold; }
};

/// I(h) = 1/2 * ||h||^2 in L^2([0,T]; R^K).
double action(const Control& h);

struct ActionResult {
    Control control;
    double action = 0.0;
    double terminal_gap = 0.0;
    bool converged = false;
    int iterations = 0;
};

struct MinimizeOptions {
    int steps = 25;               // control nodes = steps + 1
    double lambda0 = 10.0;        // initial penalty weight, x10 per round
    int max_rounds = 6;
    int max_iters_per_round = 80;
    double fd_rel_step = 1e-6;
    SolverConfig solver;
};

/// Penalized descent on action(h) + lambda * gap(h)^2 where
/// gap = ||u_h(T) - target||_{L^1}. Central finite-difference gradients and a
/// Barzilai-Borwein step with Armijo backtracking; the forward map is not
/// smooth at shocks, so no adjoint. Non-convergence is reported, not thrown.
ActionResult minimize_action(const Field& u0, const Field& target, double delta_target,
                             const FluxModel& flux, const NoiseModel& noise, double T,
                             const MinimizeOptions& opt = {});

struct MCRow {
    double eps;
    uint64_t n_traj;
    uint64_t hits;
    double p_hat;
    double ci_lo, ci_hi;        // 95% Wilson score interval
    double minus_eps_log_p;     // NaN when p_hat == 0
    bool usable;                // p_hat > 0
};

struct MCTable {
    std::vector<MCRow> rows;
};

struct MCTrajRecord {
    uint64_t traj;
    uint64_t seed;
    double stat;  // event statistic of the final snapshot
    bool hit;
};

/// Plain Monte Carlo over the uncontrolled small-noise equation; one derived
/// Wiener stream per trajectory, so the table is independent of thread count.
/// When records is non-null it receives one vector per eps, indexed by traj.
MCTable mc_rare_event(const Field& u0, const FluxModel& flux, const NoiseModel& noise,
                      const RareEvent& event, const std::vector<double>& eps_list,
                      uint64_t n_traj, uint64_t master_seed, double T, int steps,
                      const SolverConfig& cfg = {},
                      std::vector<std::vector<MCTrajRecord>>* records = nullptr);

struct InsufficientDataError : std::runtime_error {
    explicit InsufficientDataError(const std::string& what) : std::runtime_error(what) {}
};

struct LdpFitReport {
    std::vector<double> eps;
    std::vector<double> values;  // -eps log p_hat, usable rows only
    bool monotone = false;       // trend toward the extrapolated limit
    double limit = 0.0;          // quadratic-in-eps extrapolation to eps = 0
    double ratio = 0.0;          // limit / action_star
};

/// Fits the rate from the last three usable rows by Lagrange extrapolation of
/// the quadratic through (eps_i, -eps_i log p_i) at eps = 0; plain per-row
/// values carry an O(eps log 1/eps) prefactor bias that the extrapolation
/// removes.
LdpFitReport ldp_fit(const MCTable& table, double action_star);

struct CondBRow {
    double eps;
    double mean_gap;      // mean ||Ybar^eps - Z^eps||_{L^1([0,T];L^1)}
    double exceed_frac;   // fraction of trajectories with gap > delta
};

/// Shifted stochastic solution vs skeleton solution, common random numbers
/// across the eps sweep. h_family[i] drives both solves at eps_list[i].
std::vector<CondBRow> condition_b_gap(const Field& u0, const FluxModel& flux,
                                      const NoiseModel& noise,
                                      const std::vector<Control>& h_family,
                                      const std::vector<double>& eps_list, uint64_t n_traj,
                                      uint64_t master_seed, double M, double delta,
                                      const SolverConfig& cfg = {});

struct WeakProbeRow {
    double eps;
    double solution_gap;   // ||u_{h^eps} - u_h||_{L^1 L^1}
    double control_gap_sq; // integral |h^eps - h|^2, bounded away from 0
};

struct Oscillation {
    double amplitude = 1.0;
    int mode = 0;  // index k of the perturbed noise coordinate
};

/// Deterministic probe of skeleton-map continuity under weak-but-not-strong
/// control convergence: h^eps(t) = h(t) + c sin(2 pi t / eps) e_k.
std::vector<WeakProbeRow> weak_continuity_probe(const Field& u0, const FluxModel& flux,
                                                const NoiseModel& noise, const Control& h,
                                                const Oscillation& osc,
                                                const std::vector<double>& eps_list,
                                                double M, const SolverConfig& cfg = {});

/// Parallelism cap: SCLAB_THREADS if set, otherwise the logical core count.
unsigned thread_count();

}  // namespace sclab::ldp
