#pragma once

#include <map>
#include <vector>

#include "freechaos/grid.hpp"

namespace freechaos {

using Index = std::vector<int>;

// Piecewise-constant function on grid^order, stored as a sparse map from
// cell-index tuples to coefficients. Order 0 is a plain scalar (empty tuple).
// All operations are pure; a kernel is never mutated after it is built.
class StepKernel {
public:
    using EntryMap = std::map<Index, double>;

    StepKernel(Grid grid, int order);
    static StepKernel scalar(Grid grid, double value);
    static StepKernel single_entry(Grid grid, const Index& idx, double value);

    const Grid& grid() const { return grid_; }
    int order() const { return order_; }
    const EntryMap& entries() const { return entries_; }
    std::size_t support_size() const { return entries_.size(); }
    bool is_zero() const { return entries_.empty(); }

    // Builder-side mutators. set() with value 0 erases the entry.
    void set(const Index& idx, double value);
    void add(const Index& idx, double value);

    double at(const Index& idx) const;
    double scalar_value() const; // order 0 only

    bool is_symmetric(double tol = 0.0) const;

private:
    void check_index(const Index& idx) const;

    Grid grid_;
    int order_ = 0;
    EntryMap entries_;
};

// Index-reversal involution f*(t1..tq) = f(tq..t1) (real coefficients).
StepKernel mirror_adjoint(const StepKernel& f);

// <f, g> = sum f*g*delta^q. Requires identical grid and order.
double inner(const StepKernel& f, const StepKernel& g);
double norm(const StepKernel& f);

// Linear combinations on one grid/order.
StepKernel scaled(const StepKernel& f, double c);
StepKernel add_scaled(const StepKernel& f, const StepKernel& g, double c);
inline StepKernel sum(const StepKernel& f, const StepKernel& g) { return add_scaled(f, g, 1.0); }
inline StepKernel diff(const StepKernel& f, const StepKernel& g) { return add_scaled(f, g, -1.0); }

// Arc contraction of index r: integrates out r paired boundary variables,
// reversed on f's side. r = 0 is the tensor product; r = order(f) = order(g)
// yields an order-0 scalar equal to inner(g, mirror_adjoint(f)).
StepKernel arc_contract(const StepKernel& f, const StepKernel& g, int r);

// Star contraction of index (p, p-1): identifies one variable (kept free)
// and integrates out p-1; result order is order(f) + order(g) - 2p + 1.
StepKernel star_contract(const StepKernel& f, const StepKernel& g, int p);

// Same step function represented on a grid with `factor` times more cells.
StepKernel refined(const StepKernel& f, int factor);

struct KernelBounds {
    double sup_bound = 0.0;        // max |coeff|
    double support_measure = 0.0;  // #supported cells * delta^q
    double box_measure = 0.0;      // t_max^q
};
KernelBounds bounds(const StepKernel& f);

struct InequalityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

// ||f arc_r g|| <= ||f||*||g||.
InequalityCheck check_arc_cauchy_schwarz(const StepKernel& f, const StepKernel& g, int r,
                                         double tol = 1e-9);

// ||f star_r^{r-1} g|| <= sqrt(M(f) M(g) (mu(S(f)) mu(S(g)))^{(q-1)/(2q)} ||f|| ||g||),
// with S taken as the full grid box.
InequalityCheck check_star_bound(const StepKernel& f, const StepKernel& g, int r,
                                 double tol = 1e-9);

} // namespace freechaos
