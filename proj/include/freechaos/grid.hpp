#pragma once

#include <stdexcept>

namespace freechaos {

// Uniform grid over [0, t_max): `cells` equal subintervals per axis.
struct Grid {
    double t_max = 1.0;
    int cells = 1;

    Grid() = default;
    Grid(double t_max_, int cells_) : t_max(t_max_), cells(cells_) {
        if (t_max <= 0.0) throw std::invalid_argument("Grid: t_max must be positive");
        if (cells < 1) throw std::invalid_argument("Grid: cells must be >= 1");
    }

    double delta() const { return t_max / cells; }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.t_max == b.t_max && a.cells == b.cells;
    }
    friend bool operator!=(const Grid& a, const Grid& b) { return !(a == b); }
};

} // namespace freechaos
