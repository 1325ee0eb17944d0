#include "sclab/flux.hpp"

#include <algorithm>
#include <cmath>

namespace sclab {

FluxModel FluxModel::burgers(int dim) {
    FluxModel f;
    f.kind_ = FluxKind::Burgers;
    f.dim_ = dim;
    f.growth_C_ = 1.0;
    f.growth_p_ = 2.0;
    return f;
}

FluxModel FluxModel::linear(std::vector<double> c) {
    if (c.empty() || c.size() > 2)
        throw std::invalid_argument("FluxModel::linear: need 1 or 2 speeds");
    FluxModel f;
    f.kind_ = FluxKind::Linear;
    f.dim_ = static_cast<int>(c.size());
    f.linear_c_ = std::move(c);
    f.growth_C_ = 1.0;
    f.growth_p_ = 2.0;
    return f;
}

FluxModel FluxModel::polynomial(std::vector<double> coeffs, int dim) {
    if (coeffs.size() < 2)
        throw std::invalid_argument("FluxModel::polynomial: need degree >= 1");
    FluxModel f;
    f.kind_ = FluxKind::Polynomial;
    f.dim_ = dim;
    f.poly_ = std::move(coeffs);
    f.compute_growth_constants();
    return f;
}

void FluxModel::compute_growth_constants() {
    // growth_p = degree of A; a grows like xi^(p-1). growth_C is fitted by
    // dense sampling of |a(xi)-a(zeta)| / (Gamma * |xi-zeta|) so the
    // Hypothesis-H spot check holds on [-5,5] with margin.
    growth_p_ = std::max(2.0, static_cast<double>(poly_.size() - 1));
    double worst = 0.0;
    const int n = 121;
    for (int i = 0; i < n; ++i) {
        double xi = -6.0 + 12.0 * i / (n - 1);
        for (int j = i + 1; j < n; ++j) {
            double zeta = -6.0 + 12.0 * j / (n - 1);
            double num = std::abs(base_deriv(0, xi) - base_deriv(0, zeta));
            double den = (1.0 + std::pow(std::abs(xi), growth_p_ - 1) +
                          std::pow(std::abs(zeta), growth_p_ - 1)) *
                         std::abs(xi - zeta);
            worst = std::max(worst, num / den);
        }
    }
    growth_C_ = std::max(1.0, worst * 1.05);
}

double FluxModel::base_value(int axis, double xi) const {
    switch (kind_) {
        case FluxKind::Burgers: return 0.5 * xi * xi;
        case FluxKind::Linear: return linear_c_[axis] * xi;
        case FluxKind::Polynomial: {
            double v = 0;
            for (std::size_t k = poly_.size(); k-- > 0;) v = v * xi + poly_[k];
            return v;
        }
    }
    return 0;
}

double FluxModel::base_deriv(int axis, double xi) const {
    switch (kind_) {
        case FluxKind::Burgers: return xi;
        case FluxKind::Linear: return linear_c_[axis];
        case FluxKind::Polynomial: {
            double v = 0;
            for (std::size_t k = poly_.size(); k-- > 1;) v = v * xi + k * poly_[k];
            return v;
        }
    }
    return 0;
}

double FluxModel::value(int axis, double xi) const {
    if (!std::isfinite(xi)) throw std::domain_error("FluxModel::value: non-finite xi");
    if (trunc_R_) {
        double R = *trunc_R_;
        if (xi > R) return base_value(axis, R) + base_deriv(axis, R) * (xi - R);
        if (xi < -R) return base_value(axis, -R) + base_deriv(axis, -R) * (xi + R);
    }
    return base_value(axis, xi);
}

double FluxModel::deriv(int axis, double xi) const {
    if (!std::isfinite(xi)) throw std::domain_error("FluxModel::deriv: non-finite xi");
    if (trunc_R_) {
        double R = *trunc_R_;
        if (xi > R) return base_deriv(axis, R);
        if (xi < -R) return base_deriv(axis, -R);
    }
    return base_deriv(axis, xi);
}

FluxModel FluxModel::truncated(double R) const {
    if (!(R > 0)) throw std::domain_error("flux_truncate: R must be > 0");
    FluxModel f = *this;
    f.trunc_R_ = R;
    return f;
}

std::vector<double> FluxModel::critical_points(int axis, double lo, double hi) const {
    std::vector<double> roots;
    if (!(lo < hi)) return roots;
    switch (kind_) {
        case FluxKind::Burgers:
            if (lo < 0 && 0 < hi) roots.push_back(0.0);
            return roots;
        case FluxKind::Linear:
            return roots;
        case FluxKind::Polynomial: break;
    }
    // bracket sign changes of a on a dense sample, then bisect
    const int samples = 256;
    double prev_x = lo, prev_v = deriv(axis, lo);
    for (int i = 1; i <= samples; ++i) {
        double x = lo + (hi - lo) * i / samples;
        double v = deriv(axis, x);
        if (prev_v == 0.0) roots.push_back(prev_x);
        else if (prev_v * v < 0) {
            double a = prev_x, b = x;
            for (int it = 0; it < 80; ++it) {
                double m = 0.5 * (a + b);
                double fm = deriv(axis, m);
                if (fm == 0.0) { a = b = m; break; }
                if (fm * prev_v < 0) b = m;
                else a = m;
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_x = x;
        prev_v = v;
    }
    return roots;
}

double FluxModel::max_wave_speed(double lo, double hi) const {
    double m = 0;
    for (int ax = 0; ax < dim_; ++ax) {
        m = std::max({m, std::abs(deriv(ax, lo)), std::abs(deriv(ax, hi))});
        const int samples = 64;
        for (int i = 1; i < samples; ++i)
            m = std::max(m, std::abs(deriv(ax, lo + (hi - lo) * i / samples)));
    }
    return m;
}

FluxEval flux_eval(const FluxModel& flux, double xi) {
    if (!std::isfinite(xi)) throw std::domain_error("flux_eval: non-finite xi");
    FluxEval e;
    for (int ax = 0; ax < flux.dim(); ++ax) {
        e.A.push_back(flux.value(ax, xi));
        e.a.push_back(flux.deriv(ax, xi));
    }
    return e;
}

}  // namespace sclab
