#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "freechaos/step_kernel.hpp"
#include "freechaos/words.hpp"

namespace freechaos {

enum class Flavor { wigner, poisson };

std::string to_string(Flavor f);
Flavor flavor_from_string(const std::string& s);

// Graded formal sum of kernels by order; order-0 part is the scalar term.
// Orders with zero kernels are dropped.
class ChaosElement {
public:
    ChaosElement(Flavor flavor, Grid grid);
    static ChaosElement scalar(Flavor flavor, Grid grid, double value);
    static ChaosElement integral(Flavor flavor, StepKernel kernel); // I(f)

    Flavor flavor() const { return flavor_; }
    const Grid& grid() const { return grid_; }
    const std::map<int, StepKernel>& parts() const { return parts_; }
    const StepKernel* part(int order) const;

    void absorb(const StepKernel& k); // add k into the part of its order

private:
    Flavor flavor_;
    Grid grid_;
    std::map<int, StepKernel> parts_;
};

// Product formulas: Wigner uses arc contractions only; Poisson adds the
// star-contraction terms.
ChaosElement wigner_multiply(const ChaosElement& a, const ChaosElement& b);
ChaosElement poisson_multiply(const ChaosElement& a, const ChaosElement& b);
ChaosElement multiply(const ChaosElement& a, const ChaosElement& b);

ChaosElement adjoint(const ChaosElement& a);
double expectation(const ChaosElement& a);

ChaosElement add(const ChaosElement& a, const ChaosElement& b);
ChaosElement scaled(const ChaosElement& a, double c);

// Iterated-contraction prescription with a per-step arc/star choice:
// sigma[p-1] = 0 folds kernel p+1 by an arc of index r[p-1], sigma[p-1] = 1
// by a star of index (r[p-1], r[p-1]-1).
struct StarWord {
    int m = 0;
    std::vector<int> sigma; // length m-1, entries in {0,1}
    std::vector<int> r;     // length m-1

    bool in_A(int q) const; // running-order feasibility, r_p >= sigma_p
    bool in_B(int q) const; // in_A and 2*sum(r) == m*q + sum(sigma)
    bool in_D(int q) const; // odd q > 2: alphabet {0,(q+1)/2,q} matched to sigma
    bool in_E(int q) const;

    int q_count(int q) const; // number of full-arc steps (r_p == q with sigma_p == 0)
};

enum class StarWordClass { B, D, E };

std::vector<StarWord> enumerate_star_words(int q, int m, StarWordClass which);

// Left-to-right folds, exactly in the words' parenthesization.
StepKernel eval_arc_word(std::span<const StepKernel> kernels, const ContractionWord& w);
double eval_star_word(std::span<const StepKernel> kernels, const StarWord& w);

struct MomentValue {
    double value = 0.0;
    long word_count = 0;
};

// Moment of I(f_1)...I(f_m) by contraction-word enumeration (shared-prefix
// depth-first fold, summed in canonical word order).
MomentValue wigner_moment(std::span<const StepKernel> kernels);
MomentValue poisson_moment(std::span<const StepKernel> kernels);
MomentValue moment_by_words(Flavor flavor, std::span<const StepKernel> kernels);

// Oracle path: repeated products followed by expectation.
double moment_by_products(Flavor flavor, std::span<const StepKernel> kernels);

} // namespace freechaos
