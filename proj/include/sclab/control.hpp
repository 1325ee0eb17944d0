#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

namespace sclab {

/// Time-discretized control h in L^2([0,T]; R^K), piecewise constant in time
/// over the solver grid. Coefficients are stored at the steps+1 uniform nodes
/// of [0,T]; the value on [t_j, t_{j+1}) is the left-node value.
class Control {
public:
    Control() = default;
    Control(int K, double T, int steps);
    static Control zero(int K, double T, int steps) { return Control(K, T, steps); }
    static Control constant(const std::vector<double>& level, double T, int steps);
    /// coeffs sampled from callables h_k(t) at the nodes.
    static Control analytic(int K, double T, int steps,
                            const std::function<double(int, double)>& h);

    int K() const { return K_; }
    double T() const { return T_; }
    int steps() const { return steps_; }
    double dt() const { return T_ / steps_; }
    std::size_t node_count() const { return static_cast<std::size_t>(steps_) + 1; }

    double& at(int node, int k) { return coeffs_[static_cast<std::size_t>(node) * K_ + k]; }
    double at(int node, int k) const { return coeffs_[static_cast<std::size_t>(node) * K_ + k]; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    std::vector<double>& coeffs() { return coeffs_; }

    /// value used on the step starting at node j (left node)
    const double* step_value(int j) const { return &coeffs_[static_cast<std::size_t>(j) * K_]; }

    bool in_ball(double M) const;

    void save_csv(std::ostream& os) const;               // header t,h1,...,hK
    static Control load_csv(std::istream& is, double T); // validates node grid

private:
    int K_ = 0;
    double T_ = 0;
    int steps_ = 0;
    std::vector<double> coeffs_;  // node-major, K per node
};

/// Trapezoid-rule value of \int_0^T sum_k h^k(s)^2 ds.
double control_norm_sq(const Control& h);

}  // namespace sclab
