#include "freechaos/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace freechaos {

std::vector<int> spec_labels(const LimitSpec& spec) {
    std::vector<int> out;
    if (const auto* ff = std::get_if<FreeFamilySpec>(&spec)) {
        for (const auto& [label, p] : ff->params) out.push_back(label);
    } else {
        for (const auto& [label, a] : std::get<EqualParamSpec>(spec).alphas)
            out.push_back(label);
    }
    return out;
}

double cumulant(const LimitSpec& spec, const std::vector<int>& labels) {
    if (labels.empty()) throw std::invalid_argument("cumulant: empty label tuple");
    const std::size_t n = labels.size();

    if (const auto* ff = std::get_if<FreeFamilySpec>(&spec)) {
        if (!std::all_of(labels.begin(), labels.end(),
                         [&](int l) { return l == labels.front(); }))
            return 0.0; // mixed free cumulants vanish
        auto it = ff->params.find(labels.front());
        if (it == ff->params.end())
            throw std::invalid_argument("cumulant: unknown label");
        if (n == 1 && ff->centered) return 0.0;
        return it->second.lambda * std::pow(it->second.alpha, static_cast<double>(n));
    }

    const auto& ep = std::get<EqualParamSpec>(spec);
    if (n == 1 && ep.centered) return 0.0;
    double prod = ep.lambda;
    for (int l : labels) {
        auto it = ep.alphas.find(l);
        if (it == ep.alphas.end()) throw std::invalid_argument("cumulant: unknown label");
        prod *= it->second;
    }
    return prod;
}

double target_moment(const LimitSpec& spec, const std::vector<int>& chi) {
    if (chi.empty()) throw std::invalid_argument("target_moment: empty label word");
    const int n = static_cast<int>(chi.size());
    if (n == 1) return cumulant(spec, chi);
    double total = 0.0;
    for (const auto& p : enumerate_nc(n)) {
        double prod = 1.0;
        for (const auto& block : p.blocks) {
            std::vector<int> labels;
            labels.reserve(block.size());
            for (int e : block) labels.push_back(chi[e - 1]);
            prod *= cumulant(spec, labels);
            if (prod == 0.0) break;
        }
        total += prod;
    }
    return total;
}

double equalparam_moment_closed(double lambda, int m) {
    if (m < 1) throw std::invalid_argument("equalparam_moment_closed: m must be >= 1");
    if (m == 1) return 0.0;
    double total = 0.0;
    for (int j = m / 2; j >= 1; --j)
        total += std::pow(lambda, j) * static_cast<double>(count_R(m, j));
    return total;
}

double semicircle_moment(double t, int n) {
    if (n < 0) throw std::invalid_argument("semicircle_moment: n must be >= 0");
    if (n % 2 != 0) return 0.0;
    return static_cast<double>(catalan_number(n / 2)) * std::pow(t, n / 2);
}

std::vector<double> charlier(int m, double lambda) {
    if (m < 0) throw std::invalid_argument("charlier: m must be >= 0");
    std::vector<double> prev{1.0};      // C_0
    if (m == 0) return prev;
    std::vector<double> cur{0.0, 1.0};  // C_1
    for (int k = 1; k < m; ++k) {
        // C_{k+1} = x*C_k - C_k - lambda*C_{k-1}
        std::vector<double> next(k + 2, 0.0);
        for (int d = 0; d <= k; ++d) next[d + 1] += cur[d];
        for (int d = 0; d <= k; ++d) next[d] -= cur[d];
        for (std::size_t d = 0; d < prev.size(); ++d) next[d] -= lambda * prev[d];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

double free_poisson_moment_single(double lambda, int n, bool centered) {
    if (n < 1) throw std::invalid_argument("free_poisson_moment_single: n must be >= 1");
    FreeFamilySpec ff;
    ff.params[1] = {lambda, 1.0};
    ff.centered = centered;
    return target_moment(LimitSpec{ff}, std::vector<int>(n, 1));
}

double cumulant_from_moments(const std::function<double(const std::vector<int>&)>& moment,
                             const std::vector<int>& labels) {
    const int n = static_cast<int>(labels.size());
    if (n == 0) throw std::invalid_argument("cumulant_from_moments: empty label tuple");
    if (n == 1) return moment(labels);
    double rest = 0.0;
    for (const auto& p : enumerate_nc(n)) {
        if (p.block_count() == 1) continue; // the unknown kappa_n itself
        double prod = 1.0;
        for (const auto& block : p.blocks) {
            std::vector<int> sub;
            sub.reserve(block.size());
            for (int e : block) sub.push_back(labels[e - 1]);
            prod *= cumulant_from_moments(moment, sub);
        }
        rest += prod;
    }
    return moment(labels) - rest;
}

} // namespace freechaos
