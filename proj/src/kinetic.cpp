#include "sclab/kinetic.hpp"

#include <cmath>

namespace sclab::kinetic {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.1415926535897932384626433832795;

double bump(double r) {
    double r2 = r * r;
    return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
}

// compactly supported C^1 bump chi(v) = cos^2(pi (v-c) / (2w)) on |v-c| < w
struct Chi {
    double c, w;
    double value(double v) const {
        if (std::abs(v - c) >= w) return 0.0;
        double th = kPi * (v - c) / (2.0 * w);
        double cs = std::cos(th);
        return cs * cs;
    }
    double deriv(double v) const {
        if (std::abs(v - c) >= w) return 0.0;
        double th = kPi * (v - c) / (2.0 * w);
        return -(kPi / (2.0 * w)) * std::sin(2.0 * th);
    }
    // antiderivative from -inf
    double integral(double v) const {
        if (v <= c - w) return 0.0;
        if (v >= c + w) return w;
        double th = kPi * (v - c) / (2.0 * w);
        return (2.0 * w / kPi) * (0.5 * th + 0.25 * std::sin(2.0 * th) + kPi / 4.0);
    }
};
}  // namespace

KineticSnapshot kinetic_lift(const Field& u, const XiGrid& xi) {
    if (!xi.brackets(u))
        throw std::out_of_range("kinetic_lift: xi grid does not bracket range(u) + 1");
    KineticSnapshot s;
    s.grid = u.grid;
    s.xi = xi;
    s.u_source = u;
    s.f.resize(u.size() * static_cast<std::size_t>(xi.points));
    for (std::size_t c = 0; c < u.size(); ++c)
        for (int j = 0; j < xi.points; ++j)
            s.f[c * xi.points + j] = u.values[c] > xi.node(j) ? 1 : 0;
    return s;
}

Field reconstruct(const KineticSnapshot& snap) {
    Field u(snap.grid);
    double dxi = snap.xi.dxi();
    for (std::size_t c = 0; c < u.size(); ++c) {
        int count = 0;
        for (int j = 0; j < snap.xi.points; ++j) count += snap.at(c, j);
        u.values[c] = snap.xi.xi_min + count * dxi - 0.5 * dxi;
    }
    return u;
}

SignedL1 l1_via_kinetic(const Field& u1, const Field& u2, const XiGrid& xi) {
    if (!(u1.grid == u2.grid)) throw std::invalid_argument("l1_via_kinetic: grid mismatch");
    KineticSnapshot f1 = kinetic_lift(u1, xi);
    KineticSnapshot f2 = kinetic_lift(u2, xi);
    double dxi = xi.dxi();
    double cellvol = u1.grid.cell_volume();
    SignedL1 out{0.0, 0.0};
    for (std::size_t c = 0; c < u1.size(); ++c)
        for (int j = 0; j < xi.points; ++j) {
            bool a = f1.at(c, j), b = f2.at(c, j);
            if (a && !b) out.pos += cellvol * dxi;
            if (!a && b) out.neg += cellvol * dxi;
        }
    return out;
}

MollifierPair mollifier_pair(double gamma, double delta, double dx, double dxi) {
    if (!(gamma > 0 && gamma < 0.5)) throw std::invalid_argument("mollifier_pair: 0 < gamma < 1/2");
    if (!(delta > 0)) throw std::invalid_argument("mollifier_pair: delta > 0");
    MollifierPair m;
    m.gamma = gamma;
    m.delta = delta;
    m.dx = dx;
    m.dxi = dxi;
    auto build = [](double scale, double step) {
        int half = static_cast<int>(std::floor(scale / step));
        if (half * step >= scale) --half;
        if (half < 0) half = 0;
        std::vector<double> v(2 * half + 1);
        double sum = 0;
        for (int o = -half; o <= half; ++o) {
            v[o + half] = bump(o * step / scale);
            sum += v[o + half];
        }
        for (double& x : v) x /= sum * step;  // discrete integral = 1
        return v;
    };
    m.rho = build(gamma, dx);
    m.psi = build(delta, dxi);
    return m;
}

double doubling_functional(const Field& u1, const Field& u2, double gamma, double delta,
                           const XiGrid& xi) {
    if (!(u1.grid == u2.grid)) throw std::invalid_argument("doubling_functional: grid mismatch");
    const TorusGrid& g = u1.grid;
    int n = g.cells_per_axis;
    if (g.dim == 1 && (n > 256 || xi.points > 128))
        throw CostGuardError("doubling_functional: 1D budget is Nx <= 256, Mxi <= 128 (got Nx=" +
                             std::to_string(n) + ", Mxi=" + std::to_string(xi.points) + ")");
    MollifierPair mp = mollifier_pair(gamma, delta, g.cell_width(), xi.dxi());
    int rh = mp.rho_half(), ph = mp.psi_half();
    double ops = static_cast<double>(g.cell_count()) * std::pow(2.0 * rh + 1, g.dim) *
                 xi.points * (2.0 * ph + 1);
    if (ops > 2e9)
        throw CostGuardError("doubling_functional: estimated " + std::to_string(ops) +
                             " kernel evaluations exceeds the 2e9 budget");

    KineticSnapshot f1 = kinetic_lift(u1, xi);
    KineticSnapshot f2 = kinetic_lift(u2, xi);
    double dx = g.cell_width(), dxi = xi.dxi();
    double cellvol = g.cell_volume();
    int P = xi.points;

    auto f2_at = [&](std::size_t cell, int j) -> double {
        if (j < 0) return 1.0;
        if (j >= P) return 0.0;
        return f2.at(cell, j);
    };

    double total = 0;
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
        for (int oi = -rh; oi <= rh; ++oi) {
            for (int oj = (g.dim == 2 ? -rh : 0); oj <= (g.dim == 2 ? rh : 0); ++oj) {
                double w_rho = mp.rho[oi + rh];
                if (g.dim == 2) w_rho *= mp.rho[oj + rh];
                std::size_t y = g.neighbor(c, 0, oi);
                if (g.dim == 2) y = g.neighbor(y, 1, oj);
                double wxy = w_rho * cellvol * cellvol;
                for (int j = 0; j < P; ++j) {
                    double a = f1.at(c, j);
                    double inner = 0;
                    for (int p = -ph; p <= ph; ++p) {
                        double b = f2_at(y, j - p);  // zeta = xi - p*dxi
                        inner += mp.psi[p + ph] * (a * (1.0 - b) + (1.0 - a) * b);
                    }
                    total += wxy * inner * dxi * dxi;
                }
            }
        }
    }
    return total;
}

DiscreteKineticMeasure parabolic_kinetic_measure(const Trajectory& traj, double eta,
                                                 const XiGrid& xi) {
    DiscreteKineticMeasure m;
    if (eta == 0.0) return m;
    if (eta < 0) throw std::invalid_argument("parabolic_kinetic_measure: eta >= 0 required");
    (void)xi;
    for (std::size_t i = 0; i + 1 < traj.fields.size(); ++i) {
        const Field& u = traj.fields[i];
        const TorusGrid& g = u.grid;
        double dt = traj.times[i + 1] - traj.times[i];
        double inv_dx = 1.0 / g.cell_width();
        double cellvol = g.cell_volume();
        for (std::size_t c = 0; c < u.size(); ++c) {
            double grad2 = 0;
            for (int ax = 0; ax < g.dim; ++ax) {
                double d = (u.values[g.neighbor(c, ax, 1)] - u.values[c]) * inv_dx;
                grad2 += d * d;
            }
            double mass = eta * grad2 * cellvol * dt;
            if (mass > 0)
                m.entries.push_back({c, static_cast<int>(i), u.values[c], mass});
        }
    }
    return m;
}

double heat_kinetic_residual(const Trajectory& traj, const NoiseModel& noise, double eta,
                             const TestFunctionSpec& phi, const XiGrid& xi,
                             const HeatResidualOptions& opt) {
    if (!(phi.chi_width > 0))
        throw std::invalid_argument("heat_kinetic_residual: chi_width > 0 required");
    if (xi.xi_min > phi.chi_center - phi.chi_width ||
        xi.xi_max < phi.chi_center + phi.chi_width)
        throw std::invalid_argument("heat_kinetic_residual: xi grid does not cover supp(chi)");
    if (traj.fields.size() < 2)
        throw std::invalid_argument("heat_kinetic_residual: trajectory too short");

    Chi chi{phi.chi_center, phi.chi_width};
    const TorusGrid& g = traj.fields.front().grid;
    double cellvol = g.cell_volume();
    double k2 = kTwoPi * phi.x_freq;  // alpha = cos(k2 x), lap alpha = -k2^2 alpha
    std::vector<double> alpha(g.cell_count());
    for (std::size_t c = 0; c < g.cell_count(); ++c)
        alpha[c] = std::cos(k2 * g.center(c, 0));

    NoiseTable tab(noise, g);
    double inv_dx = 1.0 / g.cell_width();
    double sqrt_eps = opt.eps > 0 ? std::sqrt(opt.eps) : 0.0;

    auto pair_sum = [&](const Field& u, auto&& fn) {
        double s = 0;
        for (std::size_t c = 0; c < u.size(); ++c) s += fn(c, u.values[c]);
        return s * cellvol;
    };

    const Field& uT = traj.fields.back();
    const Field& u0 = traj.fields.front();
    double t_boundary = pair_sum(uT, [&](std::size_t c, double v) { return alpha[c] * chi.integral(v); }) -
                        pair_sum(u0, [&](std::size_t c, double v) { return alpha[c] * chi.integral(v); });

    double t_laplace = 0, t_ito = 0, t_measure = 0, t_mart = 0;
    int steps = static_cast<int>(traj.fields.size()) - 1;
    for (int i = 0; i < steps; ++i) {
        const Field& u = traj.fields[i];
        double dt = traj.times[i + 1] - traj.times[i];
        double sqrt_dt = std::sqrt(dt);
        t_laplace += dt * pair_sum(u, [&](std::size_t c, double v) {
            return -k2 * k2 * alpha[c] * chi.integral(v);
        });
        if (sqrt_eps > 0) {
            for (int k = 0; k < noise.K(); ++k) {
                double dW = sqrt_dt * philox::normal(opt.seed, opt.traj,
                                                     static_cast<uint32_t>(i),
                                                     static_cast<uint32_t>(k));
                t_mart += sqrt_eps * dW * pair_sum(u, [&](std::size_t c, double v) {
                    return (tab.add[k][c] + tab.mult[k][c] * v) * alpha[c] * chi.value(v);
                });
            }
            t_ito += 0.5 * opt.eps * dt * pair_sum(u, [&](std::size_t c, double v) {
                double g2 = 0;
                for (int k = 0; k < noise.K(); ++k) {
                    double gk = tab.add[k][c] + tab.mult[k][c] * v;
                    g2 += gk * gk;
                }
                return alpha[c] * chi.deriv(v) * g2;
            });
        }
        t_measure += dt * pair_sum(u, [&](std::size_t c, double v) {
            double grad2 = 0;
            for (int ax = 0; ax < g.dim; ++ax) {
                double d = (u.values[g.neighbor(c, ax, 1)] - u.values[c]) * inv_dx;
                grad2 += d * d;
            }
            return eta * grad2 * alpha[c] * chi.deriv(v);
        });
    }
    return std::abs(t_boundary - eta * t_laplace - t_mart - t_ito + t_measure);
}

ContractionReport contraction_check(const Field& u0_a, const Field& u0_b, const Control& h,
                                    const FluxModel& flux, const NoiseModel& noise, double T,
                                    double M, const hyperbolic::SolverConfig& cfg) {
    if (!h.in_ball(M * (1 + 1e-9)))
        throw std::invalid_argument("contraction_check: control not in S_M");
    auto ta = hyperbolic::solve_skeleton(u0_a, flux, noise, h, T, cfg);
    auto tb = hyperbolic::solve_skeleton(u0_b, flux, noise, h, T, cfg);
    ContractionReport rep;
    rep.initial_l1 = l1_distance(u0_a, u0_b);
    rep.max_l1 = 0;
    for (std::size_t i = 0; i < ta.fields.size(); ++i)
        rep.max_l1 = std::max(rep.max_l1, l1_distance(ta.fields[i], tb.fields[i]));
    rep.ratio = rep.initial_l1 > 0 ? rep.max_l1 / rep.initial_l1 : 0.0;
    rep.bound = std::exp(2.0 * std::sqrt(noise.D1()) * (T + M));
    rep.violated = rep.ratio > rep.bound;
    return rep;
}

}  // namespace sclab::kinetic
