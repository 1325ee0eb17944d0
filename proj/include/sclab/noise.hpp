#pragma once

#include <string>
#include <vector>

#include "sclab/models.hpp"

namespace sclab {

/// One noise mode: amplitude * trig(2*pi*freq*x_axis) * (b0 + b1*u).
struct NoiseMode {
    double amplitude = 0.0;
    int freq = 0;         // spatial frequency; 0 with cosine gives phi == 1
    bool use_sin = false; // sin vs cos profile
    int axis = 0;
};

struct CertifyWitness {
    double x = 0, y = 0, u = 0, v = 0;
};

struct CertifyReport {
    double D0_hat = 0;
    double D1_hat = 0;
    bool ok = true;
    CertifyWitness worst_d0;
    CertifyWitness worst_d1;
    std::string message;
};

/// Finite family g_k(x,u) = sigma_k * phi_k(x) * (b0 + b1*u) with certified
/// Hypothesis-H constants D0, D1. D1 is a Lipschitz constant valid for
/// |u| <= u_bound (the x-Lipschitz part of a multiplicative mode is not
/// uniform in u, so a working range has to be fixed).
class NoiseModel {
public:
    NoiseModel() = default;

    /// sigma_k = sigma * k^{-q}, profiles 1, sin(2 pi x), cos(2 pi x),
    /// sin(4 pi x), ... alternating along axis 0.
    static NoiseModel trigonometric(int K, double sigma, double q, double b0, double b1,
                                    double u_bound = 10.0);

    int K() const { return static_cast<int>(modes_.size()); }
    double b0() const { return b0_; }
    double b1() const { return b1_; }
    double D0() const { return D0_; }
    double D1() const { return D1_; }
    double u_bound() const { return u_bound_; }
    const std::vector<NoiseMode>& modes() const { return modes_; }

    double phi(int k, const double* x) const;
    /// g_k(x, u), all k. x has one coordinate per grid dimension.
    std::vector<double> eval(const double* x, int dim, double u) const;
    double eval_mode(int k, const double* x, double u) const;

private:
    void compute_bounds();
    std::vector<NoiseMode> modes_;
    double b0_ = 1.0, b1_ = 0.0;
    double u_bound_ = 10.0;
    double D0_ = 0, D1_ = 0;
};

/// g_k evaluated at a torus point (dim from x.size()).
std::vector<double> noise_eval(const NoiseModel& noise, const std::vector<double>& x, double u);

/// Empirical smallest constants over a deterministic sample; checks them
/// against the model's certified D0/D1.
CertifyReport certify_bounds(const NoiseModel& noise, int sample_count);

/// Precomputed g_k per grid cell split into additive and multiplicative
/// parts: g_k(x_c, u) = add[k][c] + mult[k][c] * u. Steppers use this to
/// avoid re-evaluating trig profiles every step.
struct NoiseTable {
    std::vector<std::vector<double>> add;   // sigma_k phi_k(x) b0
    std::vector<std::vector<double>> mult;  // sigma_k phi_k(x) b1
    NoiseTable() = default;
    NoiseTable(const NoiseModel& noise, const TorusGrid& grid);
    int K() const { return static_cast<int>(add.size()); }
};

}  // namespace sclab
