#include "sclab/noise.hpp"

#include <cmath>

namespace sclab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double torus_dist_sq(double x, double y) {
    double d = std::abs(x - y);
    d = std::min(d, 1.0 - d);
    return d * d;
}
}  // namespace

NoiseModel NoiseModel::trigonometric(int K, double sigma, double q, double b0, double b1,
                                     double u_bound) {
    if (K < 1) throw std::invalid_argument("NoiseModel: K >= 1 required");
    if (q < 0) throw std::invalid_argument("NoiseModel: q >= 0 required");
    NoiseModel m;
    m.b0_ = b0;
    m.b1_ = b1;
    m.u_bound_ = u_bound;
    for (int k = 1; k <= K; ++k) {
        NoiseMode mode;
        mode.amplitude = sigma * std::pow(static_cast<double>(k), -q);
        if (k == 1) {
            mode.freq = 0;
            mode.use_sin = false;  // phi == 1
        } else {
            mode.freq = k / 2;
            mode.use_sin = (k % 2 == 0);
        }
        m.modes_.push_back(mode);
    }
    m.compute_bounds();
    return m;
}

void NoiseModel::compute_bounds() {
    // sup_u (b0 + b1 u)^2 / (1 + u^2) = b0^2 + b1^2, so with |phi_k| <= 1:
    //   sum_k g_k^2 <= (b0^2 + b1^2) sum_k sigma_k^2 (1 + u^2).
    double sum_sq = 0;
    D1_ = 0;
    for (const auto& mode : modes_) {
        double s2 = mode.amplitude * mode.amplitude;
        sum_sq += s2;
        double lip = kTwoPi * mode.freq;  // |phi_k(x)-phi_k(y)| <= lip |x-y|
        double coeff = (b0_ * b0_ + b1_ * b1_) * (1.0 + u_bound_ * u_bound_);
        D1_ += 2.0 * s2 * std::max(lip * lip * coeff, b1_ * b1_);
    }
    D0_ = (b0_ * b0_ + b1_ * b1_) * sum_sq;
}

double NoiseModel::phi(int k, const double* x) const {
    const NoiseMode& m = modes_[k];
    if (m.freq == 0) return m.use_sin ? 0.0 : 1.0;
    double arg = kTwoPi * m.freq * x[m.axis];
    return m.use_sin ? std::sin(arg) : std::cos(arg);
}

double NoiseModel::eval_mode(int k, const double* x, double u) const {
    return modes_[k].amplitude * phi(k, x) * (b0_ + b1_ * u);
}

std::vector<double> NoiseModel::eval(const double* x, int /*dim*/, double u) const {
    std::vector<double> g(modes_.size());
    for (int k = 0; k < K(); ++k) g[k] = eval_mode(k, x, u);
    return g;
}

std::vector<double> noise_eval(const NoiseModel& noise, const std::vector<double>& x, double u) {
    if (!std::isfinite(u)) throw std::domain_error("noise_eval: non-finite u");
    for (double xi : x)
        if (!std::isfinite(xi)) throw std::domain_error("noise_eval: non-finite x");
    return noise.eval(x.data(), static_cast<int>(x.size()), u);
}

CertifyReport certify_bounds(const NoiseModel& noise, int sample_count) {
    if (sample_count < 100)
        throw std::invalid_argument("certify_bounds: sample_count >= 100 required");
    CertifyReport rep;
    // deterministic golden-ratio lattice over (x, y, u, v)
    const double g1 = 0.6180339887498949, g2 = 0.7548776662466927,
                 g3 = 0.5698402909980532, g4 = 0.8191725133961645;
    double ub = noise.u_bound();
    for (int i = 0; i < sample_count; ++i) {
        double x = std::fmod(0.5 + g1 * i, 1.0);
        double y = std::fmod(0.25 + g2 * i, 1.0);
        double u = (2.0 * std::fmod(0.75 + g3 * i, 1.0) - 1.0) * ub;
        double v = (2.0 * std::fmod(0.125 + g4 * i, 1.0) - 1.0) * ub;

        double sum_g2 = 0, sum_diff2 = 0;
        for (int k = 0; k < noise.K(); ++k) {
            double gx = noise.eval_mode(k, &x, u);
            double gy = noise.eval_mode(k, &y, v);
            sum_g2 += gx * gx;
            sum_diff2 += (gx - gy) * (gx - gy);
        }
        double r0 = sum_g2 / (1.0 + u * u);
        if (r0 > rep.D0_hat) {
            rep.D0_hat = r0;
            rep.worst_d0 = {x, y, u, v};
        }
        double den = torus_dist_sq(x, y) + (u - v) * (u - v);
        if (den > 1e-12) {
            double r1 = sum_diff2 / den;
            if (r1 > rep.D1_hat) {
                rep.D1_hat = r1;
                rep.worst_d1 = {x, y, u, v};
            }
        }
    }
    rep.ok = rep.D0_hat <= noise.D0() * (1 + 1e-12) && rep.D1_hat <= noise.D1() * (1 + 1e-12);
    if (!rep.ok) {
        auto& w = rep.D0_hat > noise.D0() ? rep.worst_d0 : rep.worst_d1;
        rep.message = "bound violated at witness x=" + std::to_string(w.x) +
                      " y=" + std::to_string(w.y) + " u=" + std::to_string(w.u) +
                      " v=" + std::to_string(w.v);
    }
    return rep;
}

NoiseTable::NoiseTable(const NoiseModel& noise, const TorusGrid& grid) {
    std::size_t n = grid.cell_count();
    add.assign(noise.K(), std::vector<double>(n));
    mult.assign(noise.K(), std::vector<double>(n));
    for (std::size_t c = 0; c < n; ++c) {
        double x[2] = {grid.center(c, 0), grid.dim == 2 ? grid.center(c, 1) : 0.0};
        for (int k = 0; k < noise.K(); ++k) {
            double base = noise.modes()[k].amplitude * noise.phi(k, x);
            add[k][c] = base * noise.b0();
            mult[k][c] = base * noise.b1();
        }
    }
}

}  // namespace sclab
