#pragma once

#include <functional>
#include <map>
#include <variant>
#include <vector>

#include "freechaos/partitions.hpp"

namespace freechaos {

// Free family of free Poisson variables: label i has kappa_n = lambda_i *
// alpha_i^n for n >= 2 (and n = 1 unless centered); mixed cumulants vanish.
struct FreeFamilySpec {
    struct Params {
        double lambda = 1.0;
        double alpha = 1.0;
    };
    std::map<int, Params> params;
    bool centered = true;
};

// Equal-parameter family Z(lambda, alpha): kappa_n(chi) = lambda *
// alpha_{chi(1)} ... alpha_{chi(n)} for n >= 2 (and n = 1 unless centered).
struct EqualParamSpec {
    double lambda = 1.0;
    std::map<int, double> alphas;
    bool centered = true;
};

using LimitSpec = std::variant<FreeFamilySpec, EqualParamSpec>;

std::vector<int> spec_labels(const LimitSpec& spec);

// Joint free cumulant of the labelled variables.
double cumulant(const LimitSpec& spec, const std::vector<int>& labels);

// Moment via the moment-cumulant conversion: sum over NC(n) of block-wise
// cumulant products.
double target_moment(const LimitSpec& spec, const std::vector<int>& chi);

// Closed form for the centered equal-parameter family with unit alphas:
// sum_j lambda^j R_{m,j}.
double equalparam_moment_closed(double lambda, int m);

double semicircle_moment(double t, int n);

// Coefficients (ascending degree) of the centered free Charlier polynomial
// C_m(x, lambda): C_0 = 1, C_1 = x, x C_m = C_{m+1} + C_m + lambda C_{m-1}.
std::vector<double> charlier(int m, double lambda);

double free_poisson_moment_single(double lambda, int n, bool centered);

// Triangular inversion of the NC moment sum; `moment` must accept any label
// word. Used as an independent consistency route for cumulant().
double cumulant_from_moments(const std::function<double(const std::vector<int>&)>& moment,
                             const std::vector<int>& labels);

} // namespace freechaos
