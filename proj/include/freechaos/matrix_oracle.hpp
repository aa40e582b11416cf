#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace freechaos {

// Monte-Carlo sanity oracle for the target laws: GUE-normalized Hermitian
// matrices for the semicircle, complex Wishart for free Poisson. Complex
// ensembles keep the finite-N moment bias at O(1/N^2), well below the
// sampling error at the default sizes.
struct SimConfig {
    enum class Model { semicircle, free_poisson };
    Model model = Model::semicircle;
    double lambda = 1.0; // free_poisson only
    int size = 400;
    int trials = 200;
    std::uint64_t seed = 12345;
    std::vector<int> orders = {1, 2, 3, 4};
    int threads = 1;
};

struct MomentEstimate {
    int order = 0;
    double estimate = 0.0;
    double stderr_ = 0.0;
    double target = 0.0;
};

// Averages of N^{-1} tr(X^k) over trials with sample standard errors.
// Per-trial RNG streams are split deterministically from the seed, so the
// result does not depend on the thread count.
std::vector<MomentEstimate> estimate_moments(const SimConfig& cfg);

SimConfig::Model model_from_string(const std::string& s);
std::string to_string(SimConfig::Model m);

} // namespace freechaos
