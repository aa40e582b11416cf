#include "freechaos/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "freechaos/parallel.hpp"

namespace freechaos {

std::string to_string(Theorem t) {
    switch (t) {
        case Theorem::t2_7: return "2.7";
        case Theorem::t3_3: return "3.3";
        case Theorem::t4_2: return "4.2";
        case Theorem::t4_4: return "4.4";
    }
    return "?";
}

Theorem theorem_from_string(const std::string& s) {
    if (s == "2.7") return Theorem::t2_7;
    if (s == "3.3") return Theorem::t3_3;
    if (s == "4.2") return Theorem::t4_2;
    if (s == "4.4") return Theorem::t4_4;
    throw std::invalid_argument("unknown theorem '" + s + "'");
}

namespace {

Flavor theorem_flavor(Theorem t) {
    return (t == Theorem::t2_7 || t == Theorem::t4_2) ? Flavor::wigner : Flavor::poisson;
}

bool theorem_needs_even_q(Theorem t) {
    return t == Theorem::t2_7 || t == Theorem::t4_2;
}

StepKernel unit_cell_pair(const Grid& grid, int a, int b, double v) {
    StepKernel k(grid, 2);
    k.set({a, b}, v);
    return k;
}

StepKernel fetch_symmetric(const KernelFamily& family, int n, int label) {
    StepKernel k = family.kernel(n, label);
    if (!k.is_symmetric())
        throw std::invalid_argument("family '" + family.builder +
                                    "' produced a non-symmetric kernel");
    return k;
}

} // namespace

KernelFamily family_exact_wigner(const std::map<int, int>& lambda, int q) {
    if (q != 2)
        throw std::invalid_argument(
            "family_exact_wigner: only q = 2 admits an exactly closed family");
    if (lambda.empty()) throw std::invalid_argument("family_exact_wigner: no labels");
    for (const auto& [label, rank] : lambda)
        if (rank < 1) throw std::invalid_argument("family_exact_wigner: ranks must be >= 1");

    KernelFamily fam;
    fam.builder = "exact_wigner";
    fam.flavor = Flavor::wigner;
    fam.q = q;
    int cell = 0;
    FreeFamilySpec spec;
    spec.centered = true;
    for (const auto& [label, rank] : lambda) {
        fam.labels.push_back(label);
        fam.label_base_cell[label] = cell;
        fam.label_rank[label] = rank;
        cell += rank + 1; // one spare cell per label for perturbations
        spec.params[label] = {static_cast<double>(rank), 1.0};
    }
    fam.target = spec;
    fam.uniform_support = true;

    const Grid grid(static_cast<double>(cell), cell);
    const auto base_cell = fam.label_base_cell;
    const auto rank_of = fam.label_rank;
    fam.kernel = [grid, base_cell, rank_of](int, int label) {
        auto bit = base_cell.find(label);
        auto rit = rank_of.find(label);
        if (bit == base_cell.end() || rit == rank_of.end())
            throw std::invalid_argument("family_exact_wigner: unknown label");
        StepKernel k(grid, 2);
        for (int c = bit->second; c < bit->second + rit->second; ++c) k.set({c, c}, 1.0);
        return k;
    };
    return fam;
}

KernelFamily family_perturbed_wigner(const KernelFamily& base) {
    if (base.builder != "exact_wigner")
        throw std::invalid_argument("family_perturbed_wigner: base must be an exact family");
    KernelFamily fam = base;
    fam.builder = "perturbed_wigner";
    const auto base_kernel = base.kernel;
    const auto base_cell = base.label_base_cell;
    const auto rank_of = base.label_rank;
    fam.kernel = [base_kernel, base_cell, rank_of](int n, int label) {
        if (n < 1) throw std::invalid_argument("family_perturbed_wigner: n must be >= 1");
        const double eps = 1.0 / n;
        StepKernel f = scaled(base_kernel(n, label), 1.0 + eps);
        const int first = base_cell.at(label);
        const int spare = first + rank_of.at(label);
        f = add_scaled(f, unit_cell_pair(f.grid(), first, spare, 1.0), eps);
        f = add_scaled(f, unit_cell_pair(f.grid(), spare, first, 1.0), eps);
        return f;
    };
    return fam;
}

KernelFamily family_poisson_spread(double lambda, int q) {
    if (lambda <= 0.0) throw std::invalid_argument("family_poisson_spread: lambda must be > 0");
    if (q != 1 && q != 2)
        throw std::invalid_argument("family_poisson_spread: q must be 1 or 2");

    KernelFamily fam;
    fam.builder = "poisson_spread";
    fam.flavor = Flavor::poisson;
    fam.q = q;
    fam.labels = {1};
    FreeFamilySpec spec;
    spec.centered = true;
    spec.params[1] = {lambda, 1.0};
    fam.target = spec;

    if (q == 1) {
        fam.uniform_support = true;
        const Grid grid(lambda, 4);
        fam.kernel = [grid](int, int) {
            StepKernel k(grid, 1);
            for (int c = 0; c < grid.cells; ++c) k.set({c}, 1.0);
            return k;
        };
        return fam;
    }

    const int rank = static_cast<int>(std::lround(lambda));
    if (std::abs(lambda - rank) > 0.0 || rank < 1)
        throw std::invalid_argument(
            "family_poisson_spread: q = 2 requires a positive integer lambda");
    fam.uniform_support = false; // support measure lambda*n^2 grows with n
    fam.kernel = [rank](int n, int) {
        if (n < 1) throw std::invalid_argument("family_poisson_spread: n must be >= 1");
        const Grid grid(static_cast<double>(rank) * n, rank * n);
        StepKernel k(grid, 2);
        const double v = 1.0 / n;
        for (int j = 0; j < rank; ++j)
            for (int a = j * n; a < (j + 1) * n; ++a)
                for (int b = j * n; b < (j + 1) * n; ++b) k.set({a, b}, v);
        return k;
    };
    return fam;
}

KernelFamily family_counterexample(double lambda) {
    if (lambda <= 0.0) throw std::invalid_argument("family_counterexample: lambda must be > 0");
    KernelFamily fam;
    fam.builder = "counterexample";
    fam.flavor = Flavor::wigner;
    fam.q = 2;
    fam.labels = {1};
    FreeFamilySpec spec;
    spec.centered = true;
    spec.params[1] = {lambda, 1.0}; // declared target; the family is semicircular
    fam.target = spec;
    fam.uniform_support = true;
    fam.kernel = [lambda](int n, int) {
        if (n < 1) throw std::invalid_argument("family_counterexample: n must be >= 1");
        const Grid grid(2.0 * n, 2 * n);
        StepKernel k(grid, 2);
        const double v = std::sqrt(lambda / (2.0 * n));
        for (int p = 0; p < n; ++p) {
            k.set({2 * p, 2 * p + 1}, v);
            k.set({2 * p + 1, 2 * p}, v);
        }
        return k;
    };
    return fam;
}

KernelFamily family_exact_wigner_equal(int lambda, const std::map<int, double>& alphas) {
    if (lambda < 1) throw std::invalid_argument("family_exact_wigner_equal: lambda must be >= 1");
    if (alphas.empty()) throw std::invalid_argument("family_exact_wigner_equal: no labels");
    for (const auto& [label, a] : alphas)
        if (a == 0.0) throw std::invalid_argument("family_exact_wigner_equal: alphas must be nonzero");

    KernelFamily fam;
    fam.builder = "exact_wigner_equal";
    fam.flavor = Flavor::wigner;
    fam.q = 2;
    EqualParamSpec spec;
    spec.lambda = lambda;
    spec.alphas = alphas;
    spec.centered = true;
    for (const auto& [label, a] : alphas) fam.labels.push_back(label);
    fam.target = spec;
    fam.uniform_support = true;

    const Grid grid(static_cast<double>(lambda), lambda);
    fam.kernel = [grid, lambda, alphas](int, int label) {
        auto it = alphas.find(label);
        if (it == alphas.end())
            throw std::invalid_argument("family_exact_wigner_equal: unknown label");
        StepKernel k(grid, 2);
        for (int c = 0; c < lambda; ++c) k.set({c, c}, it->second);
        return k;
    };
    return fam;
}

KernelFamily family_poisson_spread_equal(double lambda, const std::map<int, double>& alphas) {
    if (lambda <= 0.0)
        throw std::invalid_argument("family_poisson_spread_equal: lambda must be > 0");
    if (alphas.empty()) throw std::invalid_argument("family_poisson_spread_equal: no labels");
    for (const auto& [label, a] : alphas)
        if (a == 0.0)
            throw std::invalid_argument("family_poisson_spread_equal: alphas must be nonzero");

    KernelFamily fam;
    fam.builder = "poisson_spread_equal";
    fam.flavor = Flavor::poisson;
    fam.q = 1;
    EqualParamSpec spec;
    spec.lambda = lambda;
    spec.alphas = alphas;
    spec.centered = true;
    for (const auto& [label, a] : alphas) fam.labels.push_back(label);
    fam.target = spec;
    fam.uniform_support = true;

    const Grid grid(lambda, 4);
    fam.kernel = [grid, alphas](int, int label) {
        auto it = alphas.find(label);
        if (it == alphas.end())
            throw std::invalid_argument("family_poisson_spread_equal: unknown label");
        StepKernel k(grid, 1);
        for (int c = 0; c < grid.cells; ++c) k.set({c}, it->second);
        return k;
    };
    return fam;
}

double exact_family_limit_moment(const std::map<int, double>& lambda,
                                 const std::vector<int>& chi, int q) {
    if (chi.empty()) throw std::invalid_argument("exact_family_limit_moment: empty word");
    if (chi.size() == 1) return 0.0; // centered
    const int m = static_cast<int>(chi.size());
    const SetPartition ker = kernel_partition(chi);
    double total = 0.0;
    for (const auto& w : enumerate_words(q, m, WordClass::D)) {
        const SetPartition pi = word_to_partition(w);
        if (!leq_refinement(pi, ker)) continue;
        double prod = 1.0;
        for (const auto& block : pi.blocks) {
            auto it = lambda.find(chi[block.front() - 1]);
            if (it == lambda.end())
                throw std::invalid_argument("exact_family_limit_moment: unknown label");
            prod *= it->second;
        }
        total += prod;
    }
    return total;
}

namespace {

struct TargetParams {
    double lambda_i, alpha_i, lambda_j, alpha_j;
    bool equal_param;
};

TargetParams target_params(const LimitSpec& spec, int i, int j) {
    TargetParams tp{};
    if (const auto* ff = std::get_if<FreeFamilySpec>(&spec)) {
        auto pi = ff->params.find(i), pj = ff->params.find(j);
        if (pi == ff->params.end() || pj == ff->params.end())
            throw std::invalid_argument("check_fmt_conditions: unknown label");
        tp = {pi->second.lambda, pi->second.alpha, pj->second.lambda, pj->second.alpha, false};
    } else {
        const auto& ep = std::get<EqualParamSpec>(spec);
        auto ai = ep.alphas.find(i), aj = ep.alphas.find(j);
        if (ai == ep.alphas.end() || aj == ep.alphas.end())
            throw std::invalid_argument("check_fmt_conditions: unknown label");
        tp = {ep.lambda, ai->second, ep.lambda, aj->second, true};
    }
    return tp;
}

} // namespace

std::vector<ConditionResidual> check_fmt_conditions(const KernelFamily& family, int i, int j,
                                                    int n, Theorem theorem) {
    if (family.flavor != theorem_flavor(theorem))
        throw std::invalid_argument("check_fmt_conditions: family flavor does not match theorem");
    if (theorem_needs_even_q(theorem) && family.q % 2 != 0)
        throw std::invalid_argument("check_fmt_conditions: theorem requires even q");
    const bool equal_param = std::holds_alternative<EqualParamSpec>(family.target);
    if ((theorem == Theorem::t4_2 || theorem == Theorem::t4_4) != equal_param)
        throw std::invalid_argument("check_fmt_conditions: target kind does not match theorem");

    const StepKernel fi = fetch_symmetric(family, n, i);
    const StepKernel fj = fetch_symmetric(family, n, j);
    const TargetParams tp = target_params(family.target, i, j);
    const Flavor flavor = family.flavor;

    auto mom = [&](std::initializer_list<const StepKernel*> ks) {
        std::vector<StepKernel> list;
        for (const StepKernel* k : ks) list.push_back(*k);
        return moment_by_words(flavor, list).value;
    };

    std::vector<ConditionResidual> out;
    auto push = [&](const std::string& name, double computed, double target) {
        out.push_back({name, i, j, n, computed, target, std::abs(computed - target)});
    };

    if (theorem == Theorem::t2_7 || theorem == Theorem::t3_3) {
        if (i == j) {
            push("(2.6)", inner(fi, fj), tp.lambda_i * tp.alpha_i * tp.alpha_i);
            push("(2.7a)", mom({&fi, &fi, &fi, &fi}),
                 (2.0 * tp.lambda_i * tp.lambda_i + tp.lambda_i) * std::pow(tp.alpha_i, 4));
            push("(2.7b)", mom({&fi, &fi, &fi}), tp.lambda_i * std::pow(tp.alpha_i, 3));
        } else {
            push("(2.6)", inner(fi, fj), 0.0);
            push("(2.8a)", mom({&fi, &fi, &fj, &fj}),
                 tp.lambda_i * tp.lambda_j * tp.alpha_i * tp.alpha_i * tp.alpha_j * tp.alpha_j);
            push("(2.8b)", mom({&fi, &fj, &fj}), 0.0);
        }
    } else {
        const double lam = tp.lambda_i; // shared lambda
        push("(4.1)", inner(fi, fj), tp.alpha_i * tp.alpha_j * lam);
        push("(4.2a)", mom({&fi, &fi, &fj, &fj}),
             (2.0 * lam * lam + lam) * tp.alpha_i * tp.alpha_i * tp.alpha_j * tp.alpha_j);
        push("(4.2b)", mom({&fi, &fj, &fj}), lam * tp.alpha_i * tp.alpha_j * tp.alpha_j);
    }
    return out;
}

std::vector<ContractionNorm> check_contraction_conditions(const KernelFamily& family, int i,
                                                          int j, int n) {
    const StepKernel fi = fetch_symmetric(family, n, i);
    const StepKernel fj = fetch_symmetric(family, n, j);
    const int q = family.q;

    std::vector<ContractionNorm> out;
    for (int r = 1; r <= q - 1; ++r)
        out.push_back({"arc", i, j, n, r, norm(arc_contract(fi, fj, r))});
    if (q % 2 == 0) {
        const int half = q / 2;
        out.push_back(
            {"fixed_point", i, j, n, half, norm(diff(arc_contract(fi, fj, half), fj))});
    } else {
        const int half = (q + 1) / 2;
        out.push_back(
            {"fixed_point", i, j, n, half, norm(diff(star_contract(fi, fj, half), fj))});
    }
    for (int r = 1; r <= q; ++r)
        out.push_back({"star", i, j, n, r, norm(star_contract(fi, fj, r))});
    return out;
}

double check_em_vanishing(const KernelFamily& family, const std::vector<int>& chi, int n) {
    if (family.flavor != Flavor::wigner)
        throw std::invalid_argument("check_em_vanishing: Wigner families only");
    if (family.q % 2 != 0)
        throw std::invalid_argument("check_em_vanishing: even q only");
    if (chi.size() < 2) throw std::invalid_argument("check_em_vanishing: need m >= 2");

    std::vector<StepKernel> kernels;
    kernels.reserve(chi.size());
    for (int label : chi) kernels.push_back(fetch_symmetric(family, n, label));

    double worst = 0.0;
    for (const auto& w : enumerate_words(family.q, static_cast<int>(chi.size()), WordClass::E)) {
        const StepKernel v = eval_arc_word(kernels, w);
        worst = std::max(worst, std::abs(v.scalar_value()));
    }
    return worst;
}

ResourceError::ResourceError(long estimated_, long budget_)
    : std::runtime_error("verify: estimated word count " + std::to_string(estimated_) +
                         " exceeds budget " + std::to_string(budget_)),
      estimated(estimated_),
      budget(budget_) {}

namespace {

long estimate_word_count(const KernelFamily& family, const VerifyOptions& opts) {
    const double branch =
        family.flavor == Flavor::poisson ? 2.0 * family.q + 1.0 : family.q + 1.0;
    double words = 0.0;
    for (int m = 2; m <= opts.max_order; ++m)
        words += std::pow(static_cast<double>(family.labels.size()), m) *
                 std::pow(branch, m - 1);
    words *= static_cast<double>(opts.n_list.size());
    if (words > 4e18) return std::numeric_limits<long>::max();
    return static_cast<long>(words);
}

std::vector<std::vector<int>> all_label_words(const std::vector<int>& labels, int m) {
    std::vector<std::vector<int>> out;
    std::vector<int> chi(m, 0);
    auto rec = [&](auto&& self, int pos) -> void {
        if (pos == m) {
            out.push_back(chi);
            return;
        }
        for (int label : labels) {
            chi[pos] = label;
            self(self, pos + 1);
        }
    };
    rec(rec, 0);
    return out;
}

} // namespace

ConvergenceReport verify(const KernelFamily& family, Theorem theorem,
                         const VerifyOptions& opts) {
    if (opts.max_order < 2) throw std::invalid_argument("verify: max_order must be >= 2");
    if (opts.n_list.empty()) throw std::invalid_argument("verify: empty n_list");
    const long estimated = estimate_word_count(family, opts);
    if (estimated > opts.word_budget) throw ResourceError(estimated, opts.word_budget);

    const auto t0 = std::chrono::steady_clock::now();
    ConvergenceReport report;
    report.theorem = to_string(theorem);
    report.builder = family.builder;
    report.uniform_support = family.uniform_support;

    for (int n : opts.n_list) {
        for (int i : family.labels)
            for (int j : family.labels) {
                auto conds = check_fmt_conditions(family, i, j, n, theorem);
                report.conditions.insert(report.conditions.end(), conds.begin(), conds.end());
                auto norms = check_contraction_conditions(family, i, j, n);
                report.norms.insert(report.norms.end(), norms.begin(), norms.end());
            }
    }

    std::vector<std::vector<int>> words;
    for (int m = 2; m <= opts.max_order; ++m) {
        auto chunk = all_label_words(family.labels, m);
        words.insert(words.end(), chunk.begin(), chunk.end());
    }
    for (int n : opts.n_list) {
        std::vector<MomentError> rows(words.size());
        parallel_for_indexed(words.size(), opts.threads, [&](std::size_t w) {
            const auto& chi = words[w];
            std::vector<StepKernel> kernels;
            kernels.reserve(chi.size());
            for (int label : chi) kernels.push_back(family.kernel(n, label));
            const double computed = moment_by_words(family.flavor, kernels).value;
            const double target = target_moment(family.target, chi);
            rows[w] = {chi, n, computed, target, std::abs(computed - target)};
        });
        report.moment_errors.insert(report.moment_errors.end(), rows.begin(), rows.end());
    }

    // verdict: every residual/error forms a series over n_list, keyed by its
    // identity. Exact mode needs the value at the largest n within the
    // absolute tolerance and a non-increasing trend (up to the floor); rate
    // mode needs decay by rate_factor between the first and last n.
    std::map<std::string, std::vector<double>> series;
    auto n_pos = [&](int n) {
        return std::find(opts.n_list.begin(), opts.n_list.end(), n) - opts.n_list.begin();
    };
    auto file_series = [&](const std::string& key, int n, double value) {
        auto& vec = series[key];
        vec.resize(opts.n_list.size(), 0.0);
        vec[n_pos(n)] = value;
    };
    for (const auto& c : report.conditions)
        file_series(c.name + "#" + std::to_string(c.i) + "," + std::to_string(c.j), c.n,
                    c.residual);
    for (const auto& e : report.moment_errors) {
        std::string key = "chi#";
        for (int l : e.chi) key += std::to_string(l) + ".";
        file_series(key, e.n, e.error);
    }
    bool pass = true;
    for (const auto& [key, values] : series) {
        if (opts.tol.rate_mode) {
            if (values.back() > std::max(values.front() / opts.tol.rate_factor, opts.tol.floor))
                pass = false;
        } else {
            if (values.back() > opts.tol.absolute) pass = false;
            for (std::size_t k = 1; k < values.size(); ++k)
                if (values[k] > values[k - 1] + opts.tol.floor) pass = false;
        }
    }
    report.pass = pass;

    const auto t1 = std::chrono::steady_clock::now();
    report.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return report;
}

} // namespace freechaos
