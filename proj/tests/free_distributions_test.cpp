#include <doctest.h>

#include <cmath>

#include "freechaos/distributions.hpp"
#include "test_util.hpp"

using namespace freechaos;
using namespace freechaos::testutil;

namespace {

LimitSpec family_spec(std::initializer_list<std::pair<int, FreeFamilySpec::Params>> ps,
                      bool centered) {
    FreeFamilySpec ff;
    for (const auto& [label, p] : ps) ff.params[label] = p;
    ff.centered = centered;
    return ff;
}

} // namespace

TEST_CASE("cumulant") {
    const LimitSpec centered = family_spec({{1, {2.0, 1.5}}, {2, {3.0, 1.0}}}, true);
    CHECK(cumulant(centered, {1, 1}) == doctest::Approx(2.0 * 1.5 * 1.5));
    CHECK(cumulant(centered, {1, 2}) == 0.0);
    CHECK(cumulant(centered, {1}) == 0.0);

    const LimitSpec plain = family_spec({{1, {2.0, 1.5}}}, false);
    CHECK(cumulant(plain, {1}) == doctest::Approx(3.0));

    EqualParamSpec ep;
    ep.lambda = 2.0;
    ep.alphas = {{1, 1.0}, {2, 3.0}};
    ep.centered = true;
    CHECK(cumulant(LimitSpec{ep}, {1, 2, 2}) == doctest::Approx(18.0));
    CHECK(cumulant(LimitSpec{ep}, {2}) == 0.0);
    ep.centered = false;
    CHECK(cumulant(LimitSpec{ep}, {2}) == doctest::Approx(6.0));

    CHECK_THROWS_AS((void)cumulant(centered, {9}), std::invalid_argument);
    CHECK_THROWS_AS((void)cumulant(centered, {}), std::invalid_argument);
}

TEST_CASE("target_moment over NC sums") {
    const double l1 = 2.0, l2 = 5.0;
    const LimitSpec plain = family_spec({{1, {l1, 1.0}}, {2, {l2, 1.0}}}, false);
    // chi = (1,2,1,2): the three non-crossing partitions below {13|24}
    CHECK(target_moment(plain, {1, 2, 1, 2}) ==
          doctest::Approx(l1 * l1 * l2 * l2 + l1 * l2 * l2 + l1 * l1 * l2));

    const LimitSpec centered = family_spec({{1, {l1, 1.0}}, {2, {l2, 1.0}}}, true);
    CHECK(target_moment(centered, {1, 2, 1, 2}) == 0.0);
    CHECK(target_moment(centered, {1, 1, 1, 1}) == doctest::Approx(2.0 * l1 * l1 + l1));
}

TEST_CASE("relabeling invariance: only the kernel partition matters") {
    EqualParamSpec ep;
    ep.lambda = 1.5;
    ep.alphas = {{1, 1.0}, {2, 1.0}, {7, 1.0}, {9, 1.0}};
    ep.centered = true;
    const LimitSpec spec{ep};
    CHECK(target_moment(spec, {1, 2, 1, 2}) == doctest::Approx(target_moment(spec, {7, 9, 7, 9})));

    const LimitSpec ff = family_spec({{1, {2.0, 1.0}}, {2, {3.0, 1.0}},
                                      {7, {2.0, 1.0}}, {9, {3.0, 1.0}}}, true);
    CHECK(target_moment(ff, {1, 2, 2, 1}) == doctest::Approx(target_moment(ff, {7, 9, 9, 7})));
}

TEST_CASE("equalparam closed form") {
    CHECK(equalparam_moment_closed(1.0, 2) == doctest::Approx(1.0));
    CHECK(equalparam_moment_closed(1.0, 4) == doctest::Approx(3.0));
    CHECK(equalparam_moment_closed(3.0, 4) == doctest::Approx(21.0));

    for (double lambda : {0.5, 1.0, 3.0}) {
        for (int m = 2; m <= 8; ++m) {
            EqualParamSpec ep;
            ep.lambda = lambda;
            ep.alphas = {{1, 1.0}, {2, 1.0}};
            ep.centered = true;
            // labels are immaterial for Z(lambda)
            std::vector<int> chi;
            for (int k = 0; k < m; ++k) chi.push_back(1 + k % 2);
            CHECK(rel_close(equalparam_moment_closed(lambda, m),
                            target_moment(LimitSpec{ep}, chi), 1e-12));
        }
    }
}

TEST_CASE("semicircle moments") {
    CHECK(semicircle_moment(1.0, 4) == doctest::Approx(2.0));
    CHECK(semicircle_moment(2.0, 3) == 0.0);
    CHECK(semicircle_moment(2.0, 2) == doctest::Approx(2.0));
    CHECK(semicircle_moment(1.0, 0) == doctest::Approx(1.0));
    for (int m = 0; m <= 5; ++m)
        CHECK(semicircle_moment(1.0, 2 * m) == doctest::Approx(catalan_number(m)));
}

TEST_CASE("charlier recurrence") {
    CHECK(charlier(0, 2.0) == std::vector<double>{1.0});
    CHECK(charlier(1, 2.0) == std::vector<double>{0.0, 1.0});
    const double lambda = 2.0;
    CHECK(charlier(2, lambda) == std::vector<double>{-lambda, -1.0, 1.0});
    CHECK(charlier(3, lambda) == std::vector<double>{lambda, 1.0 - 2.0 * lambda, -2.0, 1.0});

    // x*C_m - C_{m+1} - C_m - lambda*C_{m-1} = 0 coefficient-wise
    for (int m = 1; m <= 12; ++m) {
        const auto cm = charlier(m, lambda);
        const auto cm1 = charlier(m + 1, lambda);
        const auto cm0 = charlier(m - 1, lambda);
        std::vector<double> residue(m + 2, 0.0);
        for (std::size_t d = 0; d < cm.size(); ++d) residue[d + 1] += cm[d];
        for (std::size_t d = 0; d < cm1.size(); ++d) residue[d] -= cm1[d];
        for (std::size_t d = 0; d < cm.size(); ++d) residue[d] -= cm[d];
        for (std::size_t d = 0; d < cm0.size(); ++d) residue[d] -= lambda * cm0[d];
        for (double c : residue) CHECK(c == 0.0);
    }
}

TEST_CASE("free poisson single moments") {
    CHECK(free_poisson_moment_single(1.0, 4, true) == doctest::Approx(3.0));
    CHECK(free_poisson_moment_single(1.0, 1, false) == doctest::Approx(1.0));
    CHECK(free_poisson_moment_single(1.0, 2, false) == doctest::Approx(2.0));
    CHECK(free_poisson_moment_single(1.0, 3, false) == doctest::Approx(5.0));
    CHECK(free_poisson_moment_single(1.0, 4, false) == doctest::Approx(14.0));
    CHECK(free_poisson_moment_single(0.7, 1, true) == 0.0);

    // constant-label family moment equals the single-variable law
    for (double lambda : {0.5, 2.0}) {
        const LimitSpec ff = family_spec({{3, {lambda, 1.0}}}, true);
        for (int n = 2; n <= 6; ++n)
            CHECK(rel_close(target_moment(ff, std::vector<int>(n, 3)),
                            free_poisson_moment_single(lambda, n, true), 1e-12));
    }

    // centered moments also agree with the Charlier reduction oracle
    for (double lambda : {0.5, 1.0, 3.0})
        for (int n = 1; n <= 8; ++n)
            CHECK(rel_close(free_poisson_moment_single(lambda, n, true),
                            charlier_moment(lambda, n), 1e-12));
}

TEST_CASE("alpha scaling pushes through moments") {
    const double lambda = 2.0, alpha = 1.5;
    const LimitSpec scaled = family_spec({{1, {lambda, alpha}}}, true);
    for (int n = 2; n <= 6; ++n)
        CHECK(rel_close(target_moment(scaled, std::vector<int>(n, 1)),
                        free_poisson_moment_single(lambda, n, true) * std::pow(alpha, n),
                        1e-12));
}

TEST_CASE("moment-cumulant triangular inversion") {
    const LimitSpec spec = family_spec({{1, {2.0, 1.0}}, {2, {0.5, 2.0}}}, true);
    auto moment = [&](const std::vector<int>& chi) { return target_moment(spec, chi); };
    for (int n = 1; n <= 6; ++n) {
        std::vector<int> labels;
        for (int k = 0; k < n; ++k) labels.push_back(1 + (k % 2 == 0 ? 0 : 1));
        CHECK(rel_close(cumulant_from_moments(moment, labels), cumulant(spec, labels), 1e-12));
        const std::vector<int> constant(n, 1);
        CHECK(rel_close(cumulant_from_moments(moment, constant), cumulant(spec, constant),
                        1e-12));
    }

    EqualParamSpec ep;
    ep.lambda = 1.5;
    ep.alphas = {{1, 1.0}, {2, -0.5}};
    ep.centered = true;
    const LimitSpec zspec{ep};
    auto zmoment = [&](const std::vector<int>& chi) { return target_moment(zspec, chi); };
    for (int n = 1; n <= 5; ++n) {
        std::vector<int> labels;
        for (int k = 0; k < n; ++k) labels.push_back(1 + k % 2);
        CHECK(rel_close(cumulant_from_moments(zmoment, labels), cumulant(zspec, labels), 1e-12));
    }
}
