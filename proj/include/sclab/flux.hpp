#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sclab {

enum class FluxKind { Burgers, Linear, Polynomial };

/// Scalar flux A : R -> R^N with derivative a = A'.
///
/// Supported families: Burgers A(u) = u^2/2 on every axis, linear transport
/// A_i(u) = c_i u, and a polynomial applied identically on each axis.
/// An optional truncation radius replaces A by the Lipschitz extension A^R
/// (A inside [-R, R], continued linearly with slope a(+-R) outside).
class FluxModel {
public:
    static FluxModel burgers(int dim = 1);
    static FluxModel linear(std::vector<double> c);
    static FluxModel polynomial(std::vector<double> coeffs, int dim = 1);

    int dim() const { return dim_; }
    FluxKind kind() const { return kind_; }
    double growth_C() const { return growth_C_; }
    double growth_p() const { return growth_p_; }
    std::optional<double> truncation_R() const { return trunc_R_; }

    /// A_axis(xi), with truncation applied if set.
    double value(int axis, double xi) const;
    /// a_axis(xi) = A_axis'(xi), with truncation applied if set.
    double deriv(int axis, double xi) const;

    /// Truncated variant A^R. R <= 0 is a domain error.
    FluxModel truncated(double R) const;

    /// Zeros of a_axis inside [lo, hi], ascending (used by the monotone
    /// flux formulas for the general polynomial/truncated case).
    std::vector<double> critical_points(int axis, double lo, double hi) const;

    /// max |a_axis(xi)| over |xi| <= r and all axes.
    double max_wave_speed(double lo, double hi) const;

private:
    FluxModel() = default;
    double base_value(int axis, double xi) const;
    double base_deriv(int axis, double xi) const;
    void compute_growth_constants();

    FluxKind kind_ = FluxKind::Burgers;
    int dim_ = 1;
    std::vector<double> linear_c_;
    std::vector<double> poly_;  // coefficients of A, ascending degree
    std::optional<double> trunc_R_;
    double growth_C_ = 1.0;
    double growth_p_ = 2.0;
};

/// (A(xi), a(xi)) per axis. Non-finite xi is a domain error.
struct FluxEval {
    std::vector<double> A;
    std::vector<double> a;
};
FluxEval flux_eval(const FluxModel& flux, double xi);

inline FluxModel flux_truncate(const FluxModel& flux, double R) { return flux.truncated(R); }

}  // namespace sclab
