#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sclab {

/// Uniform periodic grid on the unit torus, 1 or 2 dimensional.
struct TorusGrid {
    int dim = 1;
    int cells_per_axis = 4;

    TorusGrid() = default;
    TorusGrid(int dim_, int n) : dim(dim_), cells_per_axis(n) {
        if (dim != 1 && dim != 2)
            throw std::invalid_argument("TorusGrid: dim must be 1 or 2");
        if (n < 4) throw std::invalid_argument("TorusGrid: cells_per_axis must be >= 4");
    }

    double cell_width() const { return 1.0 / cells_per_axis; }
    std::size_t cell_count() const {
        std::size_t c = static_cast<std::size_t>(cells_per_axis);
        return dim == 1 ? c : c * c;
    }
    double cell_volume() const { return std::pow(cell_width(), dim); }

    // periodic wrap of an axis index
    int wrap(int i) const {
        int n = cells_per_axis;
        i %= n;
        return i < 0 ? i + n : i;
    }
    std::size_t index(int i, int j = 0) const {
        return static_cast<std::size_t>(wrap(i)) +
               static_cast<std::size_t>(dim == 2 ? wrap(j) : 0) * cells_per_axis;
    }
    // neighbor of flat cell `c` shifted by `off` along `axis`
    std::size_t neighbor(std::size_t c, int axis, int off) const {
        int n = cells_per_axis;
        int i = static_cast<int>(c % n);
        int j = static_cast<int>(c / n);
        if (axis == 0) i = wrap(i + off);
        else j = wrap(j + off);
        return static_cast<std::size_t>(i) + static_cast<std::size_t>(j) * n;
    }
    // cell-center coordinate, component `axis`
    double center(std::size_t c, int axis) const {
        int n = cells_per_axis;
        int i = axis == 0 ? static_cast<int>(c % n) : static_cast<int>(c / n);
        return (i + 0.5) * cell_width();
    }

    bool operator==(const TorusGrid& o) const {
        return dim == o.dim && cells_per_axis == o.cells_per_axis;
    }
};

/// Real-valued function on a TorusGrid (one solution snapshot).
struct Field {
    TorusGrid grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const TorusGrid& g, double fill = 0.0)
        : grid(g), values(g.cell_count(), fill) {}
    Field(const TorusGrid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (values.size() != g.cell_count())
            throw std::invalid_argument("Field: value count does not match grid");
    }

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    double mean() const {
        double s = 0;
        for (double v : values) s += v;
        return s / values.size();
    }
    double min() const {
        double m = values[0];
        for (double v : values) m = std::min(m, v);
        return m;
    }
    double max() const {
        double m = values[0];
        for (double v : values) m = std::max(m, v);
        return m;
    }
    double max_abs() const { return std::max(std::abs(min()), std::abs(max())); }

    bool all_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

/// Discrete L1 distance, cell volume weighted.
inline double l1_distance(const Field& a, const Field& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("l1_distance: grid mismatch");
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a.values[i] - b.values[i]);
    return s * a.grid.cell_volume();
}

inline double l1_norm(const Field& a) {
    double s = 0;
    for (double v : a.values) s += std::abs(v);
    return s * a.grid.cell_volume();
}

inline double l2_norm_sq(const Field& a) {
    double s = 0;
    for (double v : a.values) s += v * v;
    return s * a.grid.cell_volume();
}

}  // namespace sclab
