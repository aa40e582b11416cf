#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "freechaos/chaos.hpp"
#include "freechaos/distributions.hpp"

namespace freechaos {

enum class Theorem { t2_7, t3_3, t4_2, t4_4 };

std::string to_string(Theorem t);
Theorem theorem_from_string(const std::string& s); // "2.7", "3.3", "4.2", "4.4"

// Bi-indexed kernel sequence f_n^{(i)} with a declared limit target.
struct KernelFamily {
    std::string builder;
    Flavor flavor = Flavor::wigner;
    int q = 0;
    std::vector<int> labels;
    LimitSpec target;
    bool uniform_support = true;
    std::function<StepKernel(int n, int label)> kernel;

    // cell layout of the per-label diagonal blocks (exact/perturbed builders)
    std::map<int, int> label_base_cell;
    std::map<int, int> label_rank;
};

// f^{(i)} = sum of lambda_i rank-one diagonal cell indicators on disjoint
// per-label blocks; closed under the q/2 arc contraction at every n.
// Exact closure forces q = 2 and integer ranks.
KernelFamily family_exact_wigner(const std::map<int, int>& lambda, int q);

// (1+1/n) eigenvalue drift plus a 1/n symmetric off-diagonal perturbation of
// an exact base family; every limit condition holds with residual Theta(1/n).
KernelFamily family_perturbed_wigner(const KernelFamily& base);

// q = 1: indicator of [0,lambda), exact for every n and lambda > 0.
// q = 2: integer lambda disjoint boxes [jn,(j+1)n)^2 with value 1/n; star
// contraction norms decay like n^{-1/2} while the support measure grows.
KernelFamily family_poisson_spread(double lambda, int q);

// Matched variance, semicircular fourth moment: satisfies (2.6) but not
// (2.7), so verification against a free Poisson target must fail.
KernelFamily family_counterexample(double lambda);

// Equal-parameter targets Z(lambda, alpha): every label carries alpha_i
// times one shared base kernel, so <f_i, f_j> = alpha_i alpha_j lambda for
// all pairs. Wigner variant needs integer lambda (q = 2); the Poisson
// variant is the q = 1 spread kernel.
KernelFamily family_exact_wigner_equal(int lambda, const std::map<int, double>& alphas);
KernelFamily family_poisson_spread_equal(double lambda, const std::map<int, double>& alphas);

// n->infinity moment of the exact Wigner family via the D_m word sum
// (valid for arbitrary positive lambda, not only realizable integer ranks).
double exact_family_limit_moment(const std::map<int, double>& lambda,
                                 const std::vector<int>& chi, int q);

struct ConditionResidual {
    std::string name; // "(2.6)", "(2.7a)", ...
    int i = 0, j = 0, n = 0;
    double computed = 0.0;
    double target = 0.0;
    double residual = 0.0;
};

std::vector<ConditionResidual> check_fmt_conditions(const KernelFamily& family, int i, int j,
                                                    int n, Theorem theorem);

struct ContractionNorm {
    std::string kind; // "arc", "star", "fixed_point"
    int i = 0, j = 0, n = 0, r = 0;
    double value = 0.0;
};

std::vector<ContractionNorm> check_contraction_conditions(const KernelFamily& family, int i,
                                                          int j, int n);

// max |eval_arc_word| over E_m = B_m \ D_m on (f_n^{(chi(1))}, ...).
double check_em_vanishing(const KernelFamily& family, const std::vector<int>& chi, int n);

struct ToleranceSpec {
    double absolute = 1e-9;
    bool rate_mode = false;   // require decay by rate_factor from first to last n
    double rate_factor = 4.0;
    double floor = 1e-12;
};

struct VerifyOptions {
    int max_order = 6;
    std::vector<int> n_list = {4, 16, 64};
    ToleranceSpec tol;
    long word_budget = 20000000;
    int threads = 1;
};

struct MomentError {
    std::vector<int> chi;
    int n = 0;
    double computed = 0.0;
    double target = 0.0;
    double error = 0.0;
};

struct ConvergenceReport {
    std::string theorem;
    std::string builder;
    bool uniform_support = true;
    std::vector<ConditionResidual> conditions;
    std::vector<ContractionNorm> norms;
    std::vector<MomentError> moment_errors;
    bool pass = false;
    double runtime_ms = 0.0;
};

class ResourceError : public std::runtime_error {
public:
    ResourceError(long estimated, long budget);
    long estimated;
    long budget;
};

// Joint-moment convergence certificate: every label word up to max_order is
// compared against target_moment at each n, alongside the four-moment
// conditions; verdict per the tolerance mode.
ConvergenceReport verify(const KernelFamily& family, Theorem theorem,
                         const VerifyOptions& opts);

} // namespace freechaos
