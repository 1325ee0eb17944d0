#include "sclab/control.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sclab {

Control::Control(int K, double T, int steps) : K_(K), T_(T), steps_(steps) {
    if (K < 1 || steps < 1 || !(T > 0))
        throw std::invalid_argument("Control: need K >= 1, steps >= 1, T > 0");
    coeffs_.assign(node_count() * K, 0.0);
}

Control Control::constant(const std::vector<double>& level, double T, int steps) {
    Control c(static_cast<int>(level.size()), T, steps);
    for (std::size_t j = 0; j < c.node_count(); ++j)
        for (int k = 0; k < c.K_; ++k) c.at(static_cast<int>(j), k) = level[k];
    return c;
}

Control Control::analytic(int K, double T, int steps,
                          const std::function<double(int, double)>& h) {
    Control c(K, T, steps);
    for (std::size_t j = 0; j < c.node_count(); ++j) {
        double t = T * j / steps;
        for (int k = 0; k < K; ++k) c.at(static_cast<int>(j), k) = h(k, t);
    }
    return c;
}

double control_norm_sq(const Control& h) {
    if (h.K() == 0) return 0.0;
    double sum = 0;
    std::size_t n = h.node_count();
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0;
        for (int k = 0; k < h.K(); ++k) {
            double v = h.at(static_cast<int>(j), k);
            s += v * v;
        }
        double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
        sum += w * s;
    }
    return sum * h.dt();
}

bool Control::in_ball(double M) const { return control_norm_sq(*this) <= M; }

void Control::save_csv(std::ostream& os) const {
    os << "t";
    for (int k = 1; k <= K_; ++k) os << ",h" << k;
    os << "\n";
    char buf[32];
    for (std::size_t j = 0; j < node_count(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", T_ * j / steps_);
        os << buf;
        for (int k = 0; k < K_; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", at(static_cast<int>(j), k));
            os << "," << buf;
        }
        os << "\n";
    }
}

Control Control::load_csv(std::istream& is, double T) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("control csv: empty file");
    int K = 0;
    for (char ch : line)
        if (ch == ',') ++K;
    if (K < 1) throw std::runtime_error("control csv: bad header");
    std::vector<double> flat;
    std::vector<double> times;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        int col = 0;
        while (std::getline(ss, cell, ',')) {
            double v = std::stod(cell);
            if (col == 0) times.push_back(v);
            else flat.push_back(v);
            ++col;
        }
        if (col != K + 1) throw std::runtime_error("control csv: ragged row");
    }
    if (times.size() < 2) throw std::runtime_error("control csv: need >= 2 nodes");
    int steps = static_cast<int>(times.size()) - 1;
    Control c(K, T, steps);
    double dt = T / steps;
    for (std::size_t j = 0; j < times.size(); ++j)
        if (std::abs(times[j] - dt * j) > 1e-9 * std::max(1.0, T))
            throw std::runtime_error("control csv: non-uniform time grid");
    c.coeffs() = flat;
    return c;
}

}  // namespace sclab
