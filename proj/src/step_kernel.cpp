#include "freechaos/step_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace freechaos {

namespace {

Index concat(const Index& a, const Index& b) {
    Index out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

double delta_power(const Grid& g, int k) {
    double w = 1.0;
    for (int i = 0; i < k; ++i) w *= g.delta();
    return w;
}

void require_same_grid(const StepKernel& f, const StepKernel& g, const char* who) {
    if (f.grid() != g.grid())
        throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

} // namespace

StepKernel::StepKernel(Grid grid, int order) : grid_(grid), order_(order) {
    if (order < 0) throw std::invalid_argument("StepKernel: order must be >= 0");
}

StepKernel StepKernel::scalar(Grid grid, double value) {
    StepKernel k(grid, 0);
    k.set(Index{}, value);
    return k;
}

StepKernel StepKernel::single_entry(Grid grid, const Index& idx, double value) {
    StepKernel k(grid, static_cast<int>(idx.size()));
    k.set(idx, value);
    return k;
}

void StepKernel::check_index(const Index& idx) const {
    if (static_cast<int>(idx.size()) != order_)
        throw std::invalid_argument("StepKernel: index arity does not match order");
    for (int i : idx)
        if (i < 0 || i >= grid_.cells)
            throw std::invalid_argument("StepKernel: cell index out of range");
}

void StepKernel::set(const Index& idx, double value) {
    check_index(idx);
    if (value == 0.0)
        entries_.erase(idx);
    else
        entries_[idx] = value;
}

void StepKernel::add(const Index& idx, double value) {
    check_index(idx);
    auto [it, inserted] = entries_.emplace(idx, value);
    if (!inserted) {
        it->second += value;
        if (it->second == 0.0) entries_.erase(it);
    } else if (value == 0.0) {
        entries_.erase(it);
    }
}

double StepKernel::at(const Index& idx) const {
    check_index(idx);
    auto it = entries_.find(idx);
    return it == entries_.end() ? 0.0 : it->second;
}

double StepKernel::scalar_value() const {
    if (order_ != 0) throw std::invalid_argument("scalar_value: kernel has positive order");
    auto it = entries_.find(Index{});
    return it == entries_.end() ? 0.0 : it->second;
}

bool StepKernel::is_symmetric(double tol) const {
    for (const auto& [idx, v] : entries_) {
        Index rev(idx.rbegin(), idx.rend());
        if (std::abs(at(rev) - v) > tol) return false;
    }
    return true;
}

StepKernel mirror_adjoint(const StepKernel& f) {
    StepKernel out(f.grid(), f.order());
    for (const auto& [idx, v] : f.entries()) {
        Index rev(idx.rbegin(), idx.rend());
        out.set(rev, v);
    }
    return out;
}

double inner(const StepKernel& f, const StepKernel& g) {
    require_same_grid(f, g, "inner");
    if (f.order() != g.order())
        throw std::invalid_argument("inner: order mismatch");
    const StepKernel& small = f.support_size() <= g.support_size() ? f : g;
    const StepKernel& big = f.support_size() <= g.support_size() ? g : f;
    double acc = 0.0;
    for (const auto& [idx, v] : small.entries()) {
        auto it = big.entries().find(idx);
        if (it != big.entries().end()) acc += v * it->second;
    }
    return acc * delta_power(f.grid(), f.order());
}

double norm(const StepKernel& f) { return std::sqrt(inner(f, f)); }

StepKernel scaled(const StepKernel& f, double c) {
    StepKernel out(f.grid(), f.order());
    if (c == 0.0) return out;
    for (const auto& [idx, v] : f.entries()) out.set(idx, v * c);
    return out;
}

StepKernel add_scaled(const StepKernel& f, const StepKernel& g, double c) {
    require_same_grid(f, g, "add_scaled");
    if (f.order() != g.order())
        throw std::invalid_argument("add_scaled: order mismatch");
    StepKernel out = f;
    for (const auto& [idx, v] : g.entries()) out.add(idx, v * c);
    return out;
}

StepKernel arc_contract(const StepKernel& f, const StepKernel& g, int r) {
    require_same_grid(f, g, "arc_contract");
    const int m = f.order(), n = g.order();
    if (r < 0 || r > std::min(m, n))
        throw std::invalid_argument("arc_contract: contraction index out of range");

    StepKernel out(f.grid(), m + n - 2 * r);
    if (r == 0) {
        for (const auto& [kf, vf] : f.entries())
            for (const auto& [kg, vg] : g.entries())
                out.add(concat(kf, kg), vf * vg);
        return out;
    }

    // Bucket g by its leading r indices; f's trailing r indices, reversed,
    // select the bucket: result(u,v) = delta^r * sum_s f(u, rev s) g(s, v).
    std::map<Index, std::vector<std::pair<Index, double>>> by_prefix;
    for (const auto& [kg, vg] : g.entries()) {
        Index s(kg.begin(), kg.begin() + r);
        Index v(kg.begin() + r, kg.end());
        by_prefix[std::move(s)].emplace_back(std::move(v), vg);
    }
    for (const auto& [kf, vf] : f.entries()) {
        Index u(kf.begin(), kf.begin() + (m - r));
        Index s(kf.rbegin(), kf.rbegin() + r);
        auto it = by_prefix.find(s);
        if (it == by_prefix.end()) continue;
        for (const auto& [v, vg] : it->second) out.add(concat(u, v), vf * vg);
    }

    const double w = delta_power(f.grid(), r);
    StepKernel scaled_out(f.grid(), out.order());
    for (const auto& [idx, v] : out.entries()) scaled_out.set(idx, v * w);
    return scaled_out;
}

StepKernel star_contract(const StepKernel& f, const StepKernel& g, int p) {
    require_same_grid(f, g, "star_contract");
    const int m = f.order(), n = g.order();
    if (p < 1 || p > std::min(m, n))
        throw std::invalid_argument("star_contract: contraction index out of range");

    // result(u, a, v) = delta^{p-1} * sum_s f(u, a, rev s) g(s, a, v):
    // a is the shared variable (f position m-p, g position p-1, both 0-based).
    StepKernel out(f.grid(), m + n - 2 * p + 1);
    std::map<Index, std::vector<std::pair<Index, double>>> by_prefix;
    for (const auto& [kg, vg] : g.entries()) {
        Index sa(kg.begin(), kg.begin() + p); // (s_1..s_{p-1}, a)
        Index v(kg.begin() + p, kg.end());
        by_prefix[std::move(sa)].emplace_back(std::move(v), vg);
    }
    for (const auto& [kf, vf] : f.entries()) {
        Index u(kf.begin(), kf.begin() + (m - p));
        const int a = kf[m - p];
        Index sa(kf.rbegin(), kf.rbegin() + (p - 1));
        sa.push_back(a);
        auto it = by_prefix.find(sa);
        if (it == by_prefix.end()) continue;
        Index ua = u;
        ua.push_back(a);
        for (const auto& [v, vg] : it->second) out.add(concat(ua, v), vf * vg);
    }

    const double w = delta_power(f.grid(), p - 1);
    StepKernel scaled_out(f.grid(), out.order());
    for (const auto& [idx, v] : out.entries()) scaled_out.set(idx, v * w);
    return scaled_out;
}

StepKernel refined(const StepKernel& f, int factor) {
    if (factor < 1) throw std::invalid_argument("refined: factor must be >= 1");
    Grid fine(f.grid().t_max, f.grid().cells * factor);
    StepKernel out(fine, f.order());
    const int q = f.order();
    for (const auto& [idx, v] : f.entries()) {
        // expand each coarse cell into factor^q fine cells
        Index child(q, 0);
        std::vector<int> off(q, 0);
        while (true) {
            for (int k = 0; k < q; ++k) child[k] = idx[k] * factor + off[k];
            out.set(child, v);
            int k = q - 1;
            while (k >= 0 && ++off[k] == factor) off[k--] = 0;
            if (k < 0) break;
        }
    }
    return out;
}

KernelBounds bounds(const StepKernel& f) {
    KernelBounds b;
    for (const auto& [idx, v] : f.entries()) b.sup_bound = std::max(b.sup_bound, std::abs(v));
    double cell = 1.0, box = 1.0;
    for (int i = 0; i < f.order(); ++i) {
        cell *= f.grid().delta();
        box *= f.grid().t_max;
    }
    b.support_measure = static_cast<double>(f.support_size()) * cell;
    b.box_measure = box;
    return b;
}

InequalityCheck check_arc_cauchy_schwarz(const StepKernel& f, const StepKernel& g, int r,
                                         double tol) {
    InequalityCheck c;
    c.lhs = norm(arc_contract(f, g, r));
    c.rhs = norm(f) * norm(g);
    c.holds = c.lhs <= c.rhs + tol * std::max(1.0, c.rhs);
    return c;
}

InequalityCheck check_star_bound(const StepKernel& f, const StepKernel& g, int r, double tol) {
    if (f.order() != g.order())
        throw std::invalid_argument("check_star_bound: order mismatch");
    const int q = f.order();
    if (r < 1 || r > q)
        throw std::invalid_argument("check_star_bound: contraction index out of range");
    InequalityCheck c;
    c.lhs = norm(star_contract(f, g, r));
    const KernelBounds bf = bounds(f), bg = bounds(g);
    const double expo = (q - 1.0) / (2.0 * q);
    c.rhs = std::sqrt(bf.sup_bound * bg.sup_bound *
                      std::pow(bf.box_measure * bg.box_measure, expo) * norm(f) * norm(g));
    c.holds = c.lhs <= c.rhs + tol * std::max(1.0, c.rhs);
    return c;
}

} // namespace freechaos
