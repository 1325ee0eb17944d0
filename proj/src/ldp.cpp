#include "sclab/ldp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>

namespace sclab::ldp {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

unsigned thread_count() {
    if (const char* env = std::getenv("SCLAB_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

double RareEvent::statistic(const Field& u_final) const {
    if (kind == Kind::TerminalL1BallComplement) return l1_distance(u_final, reference);
    return u_final.mean() - ref_scalar;
}

double action(const Control& h) { return 0.5 * control_norm_sq(h); }

namespace {

struct Objective {
    const Field& u0;
    const Field& target;
    const FluxModel& flux;
    const NoiseModel& noise;
    double T;
    const SolverConfig& cfg;
    int steps;

    double gap(const Control& h) const {
        try {
            Field uT =
                stochastic::solve_stochastic_final(u0, flux, noise, h, 0.0, T, cfg, 0);
            return l1_distance(uT, target);
        } catch (const hyperbolic::BlowupError&) {
            return 1e100;  // reject the trial point, keep the line search alive
        } catch (const hyperbolic::StabilityError&) {
            return 1e100;
        }
    }
    double penalized(const std::vector<double>& x, double lambda, const Control& proto,
                     double* gap_out = nullptr) const {
        Control h = proto;
        h.coeffs() = x;
        double g = gap(h);
        if (gap_out) *gap_out = g;
        return action(h) + lambda * g * g;
    }
};

std::vector<double> fd_gradient(const Objective& obj, const std::vector<double>& x,
                                double lambda, const Control& proto, double rel) {
    std::vector<double> g(x.size());
    std::vector<double> xp = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double step = rel * std::max(1.0, std::abs(x[i]));
        xp[i] = x[i] + step;
        double fp = obj.penalized(xp, lambda, proto);
        xp[i] = x[i] - step;
        double fm = obj.penalized(xp, lambda, proto);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2.0 * step);
    }
    return g;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

ActionResult minimize_action(const Field& u0, const Field& target, double delta_target,
                             const FluxModel& flux, const NoiseModel& noise, double T,
                             const MinimizeOptions& opt) {
    Objective obj{u0, target, flux, noise, T, opt.solver, opt.steps};
    Control h = Control::zero(noise.K(), T, opt.steps);
    std::vector<double> x = h.coeffs();
    std::vector<double> g_prev, x_prev;

    ActionResult best;
    best.control = h;
    best.action = action(h);
    best.terminal_gap = obj.gap(h);
    best.converged = best.terminal_gap <= delta_target;
    int iters = 0;

    double lambda = opt.lambda0;
    for (int round = 0; round < opt.max_rounds && !best.converged; ++round, lambda *= 10.0) {
        g_prev.clear();
        double f = obj.penalized(x, lambda, h);
        for (int it = 0; it < opt.max_iters_per_round; ++it) {
            std::vector<double> g = fd_gradient(obj, x, lambda, h, opt.fd_rel_step);
            double gnorm2 = dot(g, g);
            if (gnorm2 < 1e-24) break;

            double step = 1.0 / std::sqrt(gnorm2);  // first iterate: unit-length move
            if (!g_prev.empty()) {
                std::vector<double> s(x.size()), y(x.size());
                for (std::size_t i = 0; i < x.size(); ++i) {
                    s[i] = x[i] - x_prev[i];
                    y[i] = g[i] - g_prev[i];
                }
                double sy = dot(s, y);
                if (sy > 0) step = dot(s, s) / sy;  // Barzilai-Borwein
            }
            step = std::clamp(step, 1e-12, 1e6);

            // Armijo backtracking along -g
            std::vector<double> xt(x.size());
            double ft = f;
            bool moved = false;
            for (int bt = 0; bt < 30; ++bt) {
                for (std::size_t i = 0; i < x.size(); ++i) xt[i] = x[i] - step * g[i];
                double gap_t;
                ft = obj.penalized(xt, lambda, h, &gap_t);
                ++iters;
                if (ft <= f - 1e-4 * step * gnorm2) {
                    x_prev = x;
                    g_prev = g;
                    x = xt;
                    f = ft;
                    moved = true;
                    Control cand = h;
                    cand.coeffs() = x;
                    double a = action(cand);
                    bool ok = gap_t <= delta_target;
                    if ((ok && (!best.converged || a < best.action)) ||
                        (!best.converged && gap_t < best.terminal_gap)) {
                        best.control = cand;
                        best.action = a;
                        best.terminal_gap = gap_t;
                        best.converged = ok;
                    }
                    break;
                }
                step *= 0.5;
            }
            if (!moved) break;
        }
    }
    best.iterations = iters;
    return best;
}

namespace {

/// Runs fn(i) for i in [0, n) over thread_count() workers; iteration index,
/// not thread id, drives every random stream, so the result is schedule-free.
template <typename Fn>
void parallel_for(uint64_t n, Fn&& fn) {
    unsigned workers = std::min<uint64_t>(thread_count(), n ? n : 1);
    if (workers <= 1) {
        for (uint64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (uint64_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

/// 95% Wilson score interval for a binomial proportion.
std::pair<double, double> wilson95(uint64_t hits, uint64_t n) {
    const double z = 1.959963984540054;
    double p = static_cast<double>(hits) / n;
    double z2n = z * z / n;
    double denom = 1.0 + z2n;
    double center = (p + 0.5 * z2n) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / n + 0.25 * z2n / n) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace

MCTable mc_rare_event(const Field& u0, const FluxModel& flux, const NoiseModel& noise,
                      const RareEvent& event, const std::vector<double>& eps_list,
                      uint64_t n_traj, uint64_t master_seed, double T, int steps,
                      const SolverConfig& cfg,
                      std::vector<std::vector<MCTrajRecord>>* records) {
    if (n_traj < 100) throw std::invalid_argument("mc_rare_event: n_traj >= 100 required");
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1]))
            throw std::invalid_argument("mc_rare_event: eps_list must be positive decreasing");
    if (!eps_list.empty() && !(eps_list.back() > 0))
        throw std::invalid_argument("mc_rare_event: eps_list must be positive decreasing");

    Control h0 = Control::zero(noise.K(), T, steps);
    MCTable table;
    if (records) records->assign(eps_list.size(), {});
    for (std::size_t e = 0; e < eps_list.size(); ++e) {
        double eps = eps_list[e];
        std::vector<uint8_t> hit(n_traj, 0);
        std::vector<MCTrajRecord>* recs = records ? &(*records)[e] : nullptr;
        if (recs) recs->resize(n_traj);
        parallel_for(n_traj, [&](uint64_t i) {
            uint64_t seed = philox::derive_seed(master_seed, e * n_traj + i);
            Field uT = stochastic::solve_stochastic_final(u0, flux, noise, h0, eps, T, cfg, seed);
            double stat = event.statistic(uT);
            hit[i] = stat >= event.threshold ? 1 : 0;
            if (recs) (*recs)[i] = {i, seed, stat, hit[i] != 0};
        });
        uint64_t hits = 0;
        for (uint8_t b : hit) hits += b;
        MCRow row;
        row.eps = eps;
        row.n_traj = n_traj;
        row.hits = hits;
        row.p_hat = static_cast<double>(hits) / n_traj;
        auto ci = wilson95(hits, n_traj);
        row.ci_lo = ci.first;
        row.ci_hi = ci.second;
        row.usable = hits > 0;
        row.minus_eps_log_p =
            row.usable ? -eps * std::log(row.p_hat) : std::numeric_limits<double>::quiet_NaN();
        table.rows.push_back(row);
    }
    return table;
}

LdpFitReport ldp_fit(const MCTable& table, double action_star) {
    LdpFitReport rep;
    for (const auto& r : table.rows)
        if (r.usable) {
            rep.eps.push_back(r.eps);
            rep.values.push_back(r.minus_eps_log_p);
        }
    if (rep.eps.size() < 3)
        throw InsufficientDataError("ldp_fit: need >= 3 usable rows, got " +
                                    std::to_string(rep.eps.size()));
    std::size_t n = rep.eps.size();
    double e0 = rep.eps[n - 3], e1 = rep.eps[n - 2], e2 = rep.eps[n - 1];
    double f0 = rep.values[n - 3], f1 = rep.values[n - 2], f2 = rep.values[n - 1];
    // quadratic through the last three points, evaluated at eps = 0
    double l0 = (e1 * e2) / ((e0 - e1) * (e0 - e2));
    double l1 = (e0 * e2) / ((e1 - e0) * (e1 - e2));
    double l2 = (e0 * e1) / ((e2 - e0) * (e2 - e1));
    rep.limit = l0 * f0 + l1 * f1 + l2 * f2;

    rep.monotone = true;
    for (std::size_t i = 1; i < n; ++i) {
        double d_prev = std::abs(rep.values[i - 1] - rep.limit);
        double d_cur = std::abs(rep.values[i] - rep.limit);
        if (d_cur > d_prev + 1e-12) rep.monotone = false;
    }
    rep.ratio = action_star != 0 ? rep.limit / action_star
                                 : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

std::vector<CondBRow> condition_b_gap(const Field& u0, const FluxModel& flux,
                                      const NoiseModel& noise,
                                      const std::vector<Control>& h_family,
                                      const std::vector<double>& eps_list, uint64_t n_traj,
                                      uint64_t master_seed, double M, double delta,
                                      const SolverConfig& cfg) {
    if (h_family.size() != eps_list.size())
        throw std::invalid_argument("condition_b_gap: one control per eps required");
    for (std::size_t e = 0; e < eps_list.size(); ++e)
        if (!h_family[e].in_ball(M * (1 + 1e-9)))
            throw std::domain_error("condition_b_gap: control at eps=" +
                                    std::to_string(eps_list[e]) + " is outside S_M");

    std::vector<CondBRow> out;
    for (std::size_t e = 0; e < eps_list.size(); ++e) {
        double eps = eps_list[e];
        const Control& h = h_family[e];
        double T = h.T();
        auto skel = hyperbolic::solve_skeleton(u0, flux, noise, h, T, cfg);
        std::vector<double> gaps(n_traj, 0.0);
        if (eps > 0) {
            parallel_for(n_traj, [&](uint64_t i) {
                // common random numbers: stream depends on i only, not eps
                uint64_t seed = philox::derive_seed(master_seed, i);
                auto traj = stochastic::solve_stochastic(u0, flux, noise, h, eps, T, cfg, seed);
                gaps[i] = hyperbolic::l1l1_distance(traj, skel);
            });
        }
        CondBRow row;
        row.eps = eps;
        double sum = 0;
        uint64_t exceed = 0;
        for (double g : gaps) {
            sum += g;
            if (g > delta) ++exceed;
        }
        row.mean_gap = n_traj ? sum / n_traj : 0.0;
        row.exceed_frac = n_traj ? static_cast<double>(exceed) / n_traj : 0.0;
        out.push_back(row);
    }
    return out;
}

std::vector<WeakProbeRow> weak_continuity_probe(const Field& u0, const FluxModel& flux,
                                                const NoiseModel& noise, const Control& h,
                                                const Oscillation& osc,
                                                const std::vector<double>& eps_list,
                                                double M, const SolverConfig& cfg) {
    if (osc.mode < 0 || osc.mode >= h.K())
        throw std::invalid_argument("weak_continuity_probe: oscillation mode out of range");
    double T = h.T();
    auto base = hyperbolic::solve_skeleton(u0, flux, noise, h, T, cfg);

    std::vector<WeakProbeRow> out;
    for (double eps : eps_list) {
        Control hp = h;
        Control diff = Control::zero(h.K(), T, h.steps());
        for (int j = 0; j < static_cast<int>(h.node_count()); ++j) {
            double t = h.dt() * j;
            double v = osc.amplitude * std::sin(kTwoPi * t / eps);
            hp.at(j, osc.mode) += v;
            diff.at(j, osc.mode) = v;
        }
        if (!hp.in_ball(M * (1 + 1e-9)))
            throw std::domain_error("weak_continuity_probe: perturbed control at eps=" +
                                    std::to_string(eps) + " is outside S_M");
        auto pert = hyperbolic::solve_skeleton(u0, flux, noise, hp, T, cfg);
        WeakProbeRow row;
        row.eps = eps;
        row.solution_gap = hyperbolic::l1l1_distance(pert, base);
        row.control_gap_sq = control_norm_sq(diff);
        out.push_back(row);
    }
    return out;
}

}  // namespace sclab::ldp
