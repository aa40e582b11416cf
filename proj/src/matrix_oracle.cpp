#include "freechaos/matrix_oracle.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <lapacke.h>

#include "freechaos/distributions.hpp"
#include "freechaos/parallel.hpp"

namespace freechaos {

namespace {

// Fixed-algorithm generator (splitmix64 + Box-Muller) so streams are
// reproducible independent of the standard library.
struct GaussStream {
    std::uint64_t state;
    bool have_spare = false;
    double spare = 0.0;

    explicit GaussStream(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    double next_unit() { // uniform in (0, 1]
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
    }

    double next_gauss() {
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare = radius * std::sin(angle);
        have_spare = true;
        return radius * std::cos(angle);
    }
};

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
    std::uint64_t z = seed ^ (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(trial + 1));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

using cdouble = std::complex<double>;

std::vector<double> eigenvalues_hermitian(std::vector<cdouble>& a, int n) {
    std::vector<double> w(n);
    const int info = LAPACKE_zheev(LAPACK_COL_MAJOR, 'N', 'U', n,
                                   reinterpret_cast<lapack_complex_double*>(a.data()), n,
                                   w.data());
    if (info != 0) throw std::runtime_error("estimate_moments: zheev failed");
    return w;
}

std::vector<double> trial_spectrum(const SimConfig& cfg, int trial) {
    GaussStream rng(trial_seed(cfg.seed, trial));
    const int n = cfg.size;
    std::vector<cdouble> a(static_cast<std::size_t>(n) * n);

    if (cfg.model == SimConfig::Model::semicircle) {
        const double off = 1.0 / std::sqrt(2.0 * n);
        const double diag = 1.0 / std::sqrt(static_cast<double>(n));
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i <= j; ++i) {
                cdouble v = (i == j) ? cdouble(diag * rng.next_gauss(), 0.0)
                                     : cdouble(off * rng.next_gauss(), off * rng.next_gauss());
                a[static_cast<std::size_t>(j) * n + i] = v;
                a[static_cast<std::size_t>(i) * n + j] = std::conj(v);
            }
        }
        return eigenvalues_hermitian(a, n);
    }

    // complex Wishart W = G G^* / N with G of shape N x p, p/N -> lambda
    const int p = static_cast<int>(std::lround(cfg.lambda * n));
    if (p < 1) throw std::invalid_argument("estimate_moments: lambda*size rounds below 1");
    std::vector<cdouble> g(static_cast<std::size_t>(n) * p);
    const double scale = 1.0 / std::sqrt(2.0);
    for (std::size_t k = 0; k < g.size(); ++k)
        g[k] = cdouble(scale * rng.next_gauss(), scale * rng.next_gauss());
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            cdouble acc(0.0, 0.0);
            for (int k = 0; k < p; ++k)
                acc += g[static_cast<std::size_t>(k) * n + i] *
                       std::conj(g[static_cast<std::size_t>(k) * n + j]);
            acc /= static_cast<double>(n);
            a[static_cast<std::size_t>(j) * n + i] = acc;
            a[static_cast<std::size_t>(i) * n + j] = std::conj(acc);
        }
    }
    return eigenvalues_hermitian(a, n);
}

} // namespace

std::vector<MomentEstimate> estimate_moments(const SimConfig& cfg) {
    if (cfg.size < 2) throw std::invalid_argument("estimate_moments: size must be >= 2");
    if (cfg.trials < 1) throw std::invalid_argument("estimate_moments: trials must be >= 1");
    if (cfg.orders.empty()) throw std::invalid_argument("estimate_moments: no orders");

    const std::size_t norders = cfg.orders.size();
    std::vector<std::vector<double>> per_trial(cfg.trials,
                                               std::vector<double>(norders, 0.0));
    parallel_for_indexed(cfg.trials, cfg.threads, [&](std::size_t t) {
        const auto eig = trial_spectrum(cfg, static_cast<int>(t));
        for (std::size_t o = 0; o < norders; ++o) {
            double acc = 0.0;
            for (double x : eig) acc += std::pow(x, cfg.orders[o]);
            per_trial[t][o] = acc / cfg.size;
        }
    });

    std::vector<MomentEstimate> out(norders);
    for (std::size_t o = 0; o < norders; ++o) {
        double mean = 0.0;
        for (int t = 0; t < cfg.trials; ++t) mean += per_trial[t][o];
        mean /= cfg.trials;
        double var = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const double d = per_trial[t][o] - mean;
            var += d * d;
        }
        var = cfg.trials > 1 ? var / (cfg.trials - 1) : 0.0;
        const int k = cfg.orders[o];
        const double target = cfg.model == SimConfig::Model::semicircle
                                  ? semicircle_moment(1.0, k)
                                  : free_poisson_moment_single(cfg.lambda, k, false);
        out[o] = {k, mean, std::sqrt(var / cfg.trials), target};
    }
    return out;
}

SimConfig::Model model_from_string(const std::string& s) {
    if (s == "semicircle") return SimConfig::Model::semicircle;
    if (s == "free_poisson") return SimConfig::Model::free_poisson;
    throw std::invalid_argument("unknown model '" + s + "'");
}

std::string to_string(SimConfig::Model m) {
    return m == SimConfig::Model::semicircle ? "semicircle" : "free_poisson";
}

} // namespace freechaos
