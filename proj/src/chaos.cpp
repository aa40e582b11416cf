#include "freechaos/chaos.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace freechaos {

std::string to_string(Flavor f) { return f == Flavor::wigner ? "wigner" : "poisson"; }

Flavor flavor_from_string(const std::string& s) {
    if (s == "wigner") return Flavor::wigner;
    if (s == "poisson") return Flavor::poisson;
    throw std::invalid_argument("unknown flavor '" + s + "'");
}

ChaosElement::ChaosElement(Flavor flavor, Grid grid) : flavor_(flavor), grid_(grid) {}

ChaosElement ChaosElement::scalar(Flavor flavor, Grid grid, double value) {
    ChaosElement e(flavor, grid);
    e.absorb(StepKernel::scalar(grid, value));
    return e;
}

ChaosElement ChaosElement::integral(Flavor flavor, StepKernel kernel) {
    ChaosElement e(flavor, kernel.grid());
    e.absorb(kernel);
    return e;
}

const StepKernel* ChaosElement::part(int order) const {
    auto it = parts_.find(order);
    return it == parts_.end() ? nullptr : &it->second;
}

void ChaosElement::absorb(const StepKernel& k) {
    if (k.grid() != grid_) throw std::invalid_argument("ChaosElement: grid mismatch");
    if (k.is_zero()) return;
    auto it = parts_.find(k.order());
    if (it == parts_.end()) {
        parts_.emplace(k.order(), k);
    } else {
        it->second = sum(it->second, k);
        if (it->second.is_zero()) parts_.erase(it);
    }
}

namespace {

ChaosElement multiply_impl(const ChaosElement& a, const ChaosElement& b, bool stars) {
    if (a.flavor() != b.flavor())
        throw std::invalid_argument("multiply: flavor mismatch");
    if (a.grid() != b.grid()) throw std::invalid_argument("multiply: grid mismatch");
    ChaosElement out(a.flavor(), a.grid());
    for (const auto& [p, f] : a.parts()) {
        for (const auto& [r, g] : b.parts()) {
            const int top = std::min(p, r);
            for (int k = 0; k <= top; ++k) out.absorb(arc_contract(f, g, k));
            if (stars)
                for (int k = 1; k <= top; ++k) out.absorb(star_contract(f, g, k));
        }
    }
    return out;
}

} // namespace

ChaosElement wigner_multiply(const ChaosElement& a, const ChaosElement& b) {
    if (a.flavor() != Flavor::wigner)
        throw std::invalid_argument("wigner_multiply: element is not Wigner-flavored");
    return multiply_impl(a, b, false);
}

ChaosElement poisson_multiply(const ChaosElement& a, const ChaosElement& b) {
    if (a.flavor() != Flavor::poisson)
        throw std::invalid_argument("poisson_multiply: element is not Poisson-flavored");
    return multiply_impl(a, b, true);
}

ChaosElement multiply(const ChaosElement& a, const ChaosElement& b) {
    return multiply_impl(a, b, a.flavor() == Flavor::poisson);
}

ChaosElement adjoint(const ChaosElement& a) {
    ChaosElement out(a.flavor(), a.grid());
    for (const auto& [q, k] : a.parts()) out.absorb(mirror_adjoint(k));
    return out;
}

double expectation(const ChaosElement& a) {
    const StepKernel* s = a.part(0);
    return s ? s->scalar_value() : 0.0;
}

ChaosElement add(const ChaosElement& a, const ChaosElement& b) {
    if (a.flavor() != b.flavor()) throw std::invalid_argument("add: flavor mismatch");
    if (a.grid() != b.grid()) throw std::invalid_argument("add: grid mismatch");
    ChaosElement out = a;
    for (const auto& [q, k] : b.parts()) out.absorb(k);
    return out;
}

ChaosElement scaled(const ChaosElement& a, double c) {
    ChaosElement out(a.flavor(), a.grid());
    for (const auto& [q, k] : a.parts()) out.absorb(scaled(k, c));
    return out;
}

bool StarWord::in_A(int q) const {
    if (static_cast<int>(r.size()) != m - 1 || static_cast<int>(sigma.size()) != m - 1)
        return false;
    int ord = q;
    for (int p = 0; p < m - 1; ++p) {
        if (sigma[p] != 0 && sigma[p] != 1) return false;
        if (r[p] < sigma[p] || r[p] > q || r[p] > ord) return false;
        if (sigma[p] == 1 && r[p] < 1) return false;
        ord += q - 2 * r[p] + sigma[p];
    }
    return true;
}

bool StarWord::in_B(int q) const {
    if (!in_A(q)) return false;
    const long rs = std::accumulate(r.begin(), r.end(), 0L);
    const long ss = std::accumulate(sigma.begin(), sigma.end(), 0L);
    return 2 * rs == static_cast<long>(m) * q + ss;
}

bool StarWord::in_D(int q) const {
    if (q < 3 || q % 2 == 0) return false;
    if (!in_B(q)) return false;
    const int half = (q + 1) / 2;
    for (int p = 0; p < m - 1; ++p) {
        if (sigma[p] == 1) {
            if (r[p] != half) return false;
        } else {
            if (r[p] != 0 && r[p] != q) return false;
        }
    }
    return true;
}

bool StarWord::in_E(int q) const { return in_B(q) && !in_D(q); }

int StarWord::q_count(int q) const {
    int count = 0;
    for (int p = 0; p < m - 1; ++p)
        if (sigma[p] == 0 && r[p] == q) ++count;
    return count;
}

std::vector<StarWord> enumerate_star_words(int q, int m, StarWordClass which) {
    if (q < 1 || m < 2)
        throw std::invalid_argument("enumerate_star_words: need q >= 1 and m >= 2");
    if ((which == StarWordClass::D || which == StarWordClass::E) && (q < 3 || q % 2 == 0))
        throw std::invalid_argument("enumerate_star_words: D and E require odd q > 2");

    std::vector<StarWord> out;
    std::vector<int> sigma, r;
    auto dfs = [&](auto&& self, int step, int ord) -> void {
        if (step == m) {
            if (ord != 0) return;
            StarWord w{m, sigma, r};
            if (which == StarWordClass::B || (which == StarWordClass::D && w.in_D(q)) ||
                (which == StarWordClass::E && w.in_E(q)))
                out.push_back(std::move(w));
            return;
        }
        const int folds_left = m - step - 1;
        const int top = std::min(q, ord);
        for (int s = 0; s <= 1; ++s) {
            for (int rp = (s == 0 ? 0 : 1); rp <= top; ++rp) {
                const int next = ord + q - 2 * rp + s;
                if (next > folds_left * q) continue;
                sigma.push_back(s);
                r.push_back(rp);
                self(self, step + 1, next);
                sigma.pop_back();
                r.pop_back();
            }
        }
    };
    dfs(dfs, 1, q);
    return out;
}

StepKernel eval_arc_word(std::span<const StepKernel> kernels, const ContractionWord& w) {
    if (static_cast<int>(kernels.size()) != w.m)
        throw std::invalid_argument("eval_arc_word: kernel count does not match word length");
    if (!w.in_A()) throw std::invalid_argument("eval_arc_word: word is not in A_m");
    StepKernel g = kernels[0];
    for (int p = 1; p < w.m; ++p) g = arc_contract(g, kernels[p], w.r[p - 1]);
    return g;
}

double eval_star_word(std::span<const StepKernel> kernels, const StarWord& w) {
    if (static_cast<int>(kernels.size()) != w.m)
        throw std::invalid_argument("eval_star_word: kernel count does not match word length");
    const int q = kernels.empty() ? 0 : kernels[0].order();
    if (!w.in_B(q)) throw std::invalid_argument("eval_star_word: word is not in B_m");
    StepKernel g = kernels[0];
    for (int p = 1; p < w.m; ++p) {
        g = w.sigma[p - 1] == 0 ? arc_contract(g, kernels[p], w.r[p - 1])
                                : star_contract(g, kernels[p], w.r[p - 1]);
    }
    return g.scalar_value();
}

namespace {

void require_moment_input(std::span<const StepKernel> kernels) {
    if (kernels.size() < 2)
        throw std::invalid_argument("moment: need at least 2 kernels");
    const Grid& grid = kernels[0].grid();
    const int q = kernels[0].order();
    if (q < 1) throw std::invalid_argument("moment: kernels must have order >= 1");
    for (const auto& k : kernels) {
        if (k.grid() != grid) throw std::invalid_argument("moment: grid mismatch");
        if (k.order() != q) throw std::invalid_argument("moment: order mismatch");
    }
}

} // namespace

MomentValue moment_by_words(Flavor flavor, std::span<const StepKernel> kernels) {
    require_moment_input(kernels);
    const int m = static_cast<int>(kernels.size());
    const int q = kernels[0].order();
    const bool stars = flavor == Flavor::poisson;

    MomentValue mv;
    auto dfs = [&](auto&& self, int step, const StepKernel& g) -> void {
        if (step == m) {
            if (g.order() == 0) {
                mv.value += g.scalar_value();
                ++mv.word_count;
            }
            return;
        }
        const int ord = g.order();
        const int folds_left = m - step - 1;
        const int top = std::min(q, ord);
        for (int rp = 0; rp <= top; ++rp) {
            if (ord + q - 2 * rp > folds_left * q) continue;
            self(self, step + 1, arc_contract(g, kernels[step], rp));
        }
        if (stars) {
            for (int rp = 1; rp <= top; ++rp) {
                if (ord + q - 2 * rp + 1 > folds_left * q) continue;
                self(self, step + 1, star_contract(g, kernels[step], rp));
            }
        }
    };
    dfs(dfs, 1, kernels[0]);
    return mv;
}

MomentValue wigner_moment(std::span<const StepKernel> kernels) {
    return moment_by_words(Flavor::wigner, kernels);
}

MomentValue poisson_moment(std::span<const StepKernel> kernels) {
    return moment_by_words(Flavor::poisson, kernels);
}

double moment_by_products(Flavor flavor, std::span<const StepKernel> kernels) {
    require_moment_input(kernels);
    ChaosElement acc = ChaosElement::integral(flavor, kernels[0]);
    for (std::size_t i = 1; i < kernels.size(); ++i)
        acc = multiply(acc, ChaosElement::integral(flavor, kernels[i]));
    return expectation(acc);
}

} // namespace freechaos
