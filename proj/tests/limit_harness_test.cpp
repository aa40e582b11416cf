#include <doctest.h>

#include <cmath>

#include "freechaos/harness.hpp"
#include "test_util.hpp"

using namespace freechaos;
using namespace freechaos::testutil;

TEST_CASE("exact wigner family invariants") {
    const KernelFamily fam = family_exact_wigner({{1, 3}}, 2);
    const StepKernel f = fam.kernel(1, 1);
    CHECK(f.is_symmetric());
    CHECK(inner(f, f) == doctest::Approx(3.0));
    CHECK(norm(diff(arc_contract(f, f, 1), f)) == 0.0);

    const std::vector<StepKernel> four(4, f);
    CHECK(wigner_moment(four).value == doctest::Approx(21.0));
    // n-independence
    CHECK(fam.kernel(64, 1).entries() == f.entries());

    const KernelFamily two = family_exact_wigner({{1, 1}, {2, 2}}, 2);
    const StepKernel f1 = two.kernel(1, 1), f2 = two.kernel(1, 2);
    CHECK(inner(f1, f2) == 0.0);
    CHECK(inner(f2, f2) == doctest::Approx(2.0));
    // disjoint supports kill every mixed word: chi = (1,2,1,2)
    const std::vector<StepKernel> mixed{f1, f2, f1, f2};
    CHECK(wigner_moment(mixed).value == 0.0);

    // lambda = 1 family reduces to rank one; moments match the single law
    const KernelFamily one = family_exact_wigner({{1, 1}}, 2);
    const StepKernel g1 = one.kernel(1, 1);
    for (int m = 2; m <= 6; ++m) {
        const double got = wigner_moment(std::vector<StepKernel>(m, g1)).value;
        CHECK(rel_close(got, free_poisson_moment_single(1.0, m, true), 1e-12));
    }

    CHECK_THROWS_AS((void)family_exact_wigner({{1, 3}}, 4), std::invalid_argument);
    CHECK_THROWS_AS((void)family_exact_wigner({{1, 0}}, 2), std::invalid_argument);
}

TEST_CASE("perturbed family residuals decay like 1/n") {
    const KernelFamily base = family_exact_wigner({{1, 2}}, 2);
    const KernelFamily fam = family_perturbed_wigner(base);

    const StepKernel f8 = fam.kernel(8, 1);
    CHECK(f8.is_symmetric());
    const double r8 = std::abs(inner(f8, f8) - 2.0);
    const StepKernel f64 = fam.kernel(64, 1);
    const double r64 = std::abs(inner(f64, f64) - 2.0);
    CHECK(r64 <= r8 / 4.0);
    CHECK(r8 > 0.0);

    // eps = 0 limit: large n approaches the base kernel
    const StepKernel fbig = fam.kernel(1 << 20, 1);
    CHECK(norm(diff(fbig, base.kernel(1, 1))) < 1e-5);
}

TEST_CASE("poisson spread families") {
    SUBCASE("q = 2 star decay and fixed point") {
        const KernelFamily fam = family_poisson_spread(1.0, 2);
        CHECK_FALSE(fam.uniform_support);
        for (int n : {4, 16, 64}) {
            const StepKernel f = fam.kernel(n, 1);
            CHECK(inner(f, f) == doctest::Approx(1.0));
            const double star2 = norm(star_contract(f, f, 2));
            CHECK(rel_close(star2 * star2, 1.0 / n, 1e-9));
            CHECK(norm(diff(arc_contract(f, f, 1), f)) == 0.0);
            const double star1 = norm(star_contract(f, f, 1));
            CHECK(rel_close(star1 * star1, 1.0 / n, 1e-9));
        }

        const KernelFamily fam3 = family_poisson_spread(3.0, 2);
        const StepKernel f = fam3.kernel(4, 1);
        CHECK(inner(f, f) == doctest::Approx(3.0));
        CHECK(norm(diff(arc_contract(f, f, 1), f)) == 0.0);
        CHECK_THROWS_AS((void)family_poisson_spread(1.5, 2), std::invalid_argument);
    }

    SUBCASE("q = 1 family is exact for every lambda") {
        for (double lambda : {0.5, 1.0, 2.0}) {
            const KernelFamily fam = family_poisson_spread(lambda, 1);
            const StepKernel f = fam.kernel(7, 1);
            CHECK(inner(f, f) == doctest::Approx(lambda));
            CHECK(norm(diff(star_contract(f, f, 1), f)) == 0.0);
            for (int m = 2; m <= 6; ++m) {
                const double got = poisson_moment(std::vector<StepKernel>(m, f)).value;
                CHECK(rel_close(got, charlier_moment(lambda, m), 1e-12));
            }
        }
    }
}

TEST_CASE("check_fmt_conditions on the exact family") {
    const KernelFamily fam = family_exact_wigner({{1, 3}, {2, 1}}, 2);
    for (const auto& c : check_fmt_conditions(fam, 1, 1, 5, Theorem::t2_7))
        CHECK(c.residual <= 1e-9);
    for (const auto& c : check_fmt_conditions(fam, 1, 2, 5, Theorem::t2_7))
        CHECK(c.residual <= 1e-9);

    CHECK_THROWS_AS((void)check_fmt_conditions(fam, 1, 1, 5, Theorem::t3_3),
                    std::invalid_argument); // flavor mismatch
    CHECK_THROWS_AS((void)check_fmt_conditions(fam, 1, 1, 5, Theorem::t4_2),
                    std::invalid_argument); // target kind mismatch
}

TEST_CASE("check_fmt_conditions on the spread poisson family") {
    const KernelFamily fam = family_poisson_spread(1.0, 1);
    for (const auto& c : check_fmt_conditions(fam, 1, 1, 4, Theorem::t3_3)) {
        CHECK(c.residual <= 1e-9);
        if (c.name == "(2.7a)") CHECK(c.target == doctest::Approx(3.0));
    }
}

TEST_CASE("check_contraction_conditions") {
    const KernelFamily fam = family_exact_wigner({{1, 3}}, 2);
    for (const auto& n : check_contraction_conditions(fam, 1, 1, 3)) {
        if (n.kind == "fixed_point")
            CHECK(n.value == 0.0); // f arc_{q/2} f = f exactly
        if (n.kind == "arc" && n.r != 1) CHECK(n.value == 0.0);
    }

    const KernelFamily spread = family_poisson_spread(1.0, 2);
    for (int n : {4, 16}) {
        for (const auto& rec : check_contraction_conditions(spread, 1, 1, n)) {
            if (rec.kind == "star")
                CHECK(rel_close(rec.value, 1.0 / std::sqrt(n), 1e-9));
            if (rec.kind == "fixed_point") CHECK(rec.value == 0.0);
        }
    }

    StepKernel zero(Grid(1.0, 2), 2);
    KernelFamily zf = fam;
    zf.kernel = [zero](int, int) { return zero; };
    for (const auto& rec : check_contraction_conditions(zf, 1, 1, 1)) CHECK(rec.value == 0.0);
}

TEST_CASE("check_em_vanishing") {
    // at q = 2 the D alphabet {0, q/2, q} is all of {0,1,2}, so E_m is empty
    const KernelFamily fam = family_exact_wigner({{1, 2}}, 2);
    CHECK(enumerate_words(2, 4, WordClass::E).empty());
    CHECK(enumerate_words(2, 6, WordClass::E).empty());
    CHECK(check_em_vanishing(fam, {1, 1, 1, 1}, 3) == 0.0);
    CHECK(check_em_vanishing(fam, {1, 1, 1, 1, 1, 1}, 3) == 0.0);

    // q = 4 has genuine E words; agree with direct enumeration
    Grid g(1.0, 2);
    StepKernel f(g, 4); // strictly positive, so every E-word value is positive
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) f.set({a, b, c, d}, 1.0);
    KernelFamily qf;
    qf.builder = "custom";
    qf.flavor = Flavor::wigner;
    qf.q = 4;
    qf.labels = {1};
    FreeFamilySpec spec;
    spec.params[1] = {1.0, 1.0};
    qf.target = spec;
    qf.kernel = [f](int, int) { return f; };

    CHECK_FALSE(enumerate_words(4, 4, WordClass::E).empty());
    double expected = 0.0;
    const std::vector<StepKernel> ks(4, f);
    for (const auto& w : enumerate_words(4, 4, WordClass::E))
        expected = std::max(expected, std::abs(eval_arc_word(ks, w).scalar_value()));
    CHECK(check_em_vanishing(qf, {1, 1, 1, 1}, 1) == expected);
    CHECK(expected > 0.0);
}

TEST_CASE("exact_family_limit_moment matches targets for arbitrary lambda") {
    for (double l2 : {1.0, 2.5}) {
        std::map<int, double> lambda{{1, 1.0}, {2, l2}};
        FreeFamilySpec ff;
        ff.params[1] = {1.0, 1.0};
        ff.params[2] = {l2, 1.0};
        ff.centered = true;
        const LimitSpec spec{ff};
        std::vector<std::vector<int>> words = {
            {1, 1}, {1, 2}, {2, 2, 2}, {1, 2, 1, 2}, {2, 2, 2, 2}, {1, 1, 2, 2, 2, 2}};
        for (const auto& chi : words)
            CHECK(rel_close(exact_family_limit_moment(lambda, chi, 2),
                            target_moment(spec, chi), 1e-12));
    }
}

TEST_CASE("verify passes exact families and fails the counterexample") {
    VerifyOptions opts;
    opts.max_order = 5;
    opts.n_list = {2, 4};

    SUBCASE("exact wigner, theorem 2.7") {
        const KernelFamily fam = family_exact_wigner({{1, 3}}, 2);
        const ConvergenceReport rep = verify(fam, Theorem::t2_7, opts);
        CHECK(rep.pass);
        for (const auto& e : rep.moment_errors) CHECK(e.error <= 1e-9);
    }

    SUBCASE("two-label exact family") {
        const KernelFamily fam = family_exact_wigner({{1, 1}, {2, 2}}, 2);
        VerifyOptions small = opts;
        small.max_order = 4;
        const ConvergenceReport rep = verify(fam, Theorem::t2_7, small);
        CHECK(rep.pass);
    }

    SUBCASE("spread poisson q=1, theorem 3.3") {
        const KernelFamily fam = family_poisson_spread(1.0, 1);
        VerifyOptions o = opts;
        o.max_order = 5;
        o.n_list = {4, 16, 64};
        const ConvergenceReport rep = verify(fam, Theorem::t3_3, o);
        CHECK(rep.pass);
        for (const auto& e : rep.moment_errors) CHECK(e.error <= 1e-9);
    }

    SUBCASE("equal-parameter families, theorems 4.2 and 4.4") {
        const KernelFamily wig = family_exact_wigner_equal(2, {{1, 1.0}, {2, -0.5}});
        const ConvergenceReport r1 = verify(wig, Theorem::t4_2, opts);
        CHECK(r1.pass);
        const KernelFamily poi = family_poisson_spread_equal(1.5, {{1, 1.0}, {2, 2.0}});
        VerifyOptions o = opts;
        o.max_order = 4;
        const ConvergenceReport r2 = verify(poi, Theorem::t4_4, o);
        CHECK(r2.pass);
    }

    SUBCASE("counterexample fails with (2.7) highlighted") {
        const KernelFamily fam = family_counterexample(1.0);
        VerifyOptions o = opts;
        o.max_order = 4;
        const ConvergenceReport rep = verify(fam, Theorem::t2_7, o);
        CHECK_FALSE(rep.pass);
        bool cond26_ok = true, cond27_bad = false;
        for (const auto& c : rep.conditions) {
            if (c.name == "(2.6)" && c.residual > 1e-9) cond26_ok = false;
            if (c.name == "(2.7a)" && c.residual > 0.5) cond27_bad = true;
        }
        CHECK(cond26_ok);
        CHECK(cond27_bad);
    }

    SUBCASE("perturbed family passes the rate check") {
        const KernelFamily fam = family_perturbed_wigner(family_exact_wigner({{1, 2}}, 2));
        VerifyOptions o;
        o.max_order = 6;
        o.n_list = {8, 64};
        o.tol.rate_mode = true;
        o.tol.rate_factor = 4.0;
        const ConvergenceReport rep = verify(fam, Theorem::t2_7, o);
        CHECK(rep.pass);
    }

    SUBCASE("resource guard") {
        const KernelFamily fam = family_exact_wigner({{1, 1}}, 2);
        VerifyOptions o = opts;
        o.word_budget = 1;
        CHECK_THROWS_AS((void)verify(fam, Theorem::t2_7, o), ResourceError);
    }

    SUBCASE("parity violations") {
        const KernelFamily fam = family_poisson_spread(1.0, 1);
        CHECK_THROWS_AS((void)verify(fam, Theorem::t4_4, opts), std::invalid_argument);
        // t4_4 needs an equal-parameter target; t2_7 the wigner flavor
        CHECK_THROWS_AS((void)verify(fam, Theorem::t2_7, opts), std::invalid_argument);
    }
}

TEST_CASE("the centered quadratic functional attains its limits exactly") {
    // phi(I_i I_j^2 I_i) - 2 phi(I_i I_j^2): 2*lambda^2 - lambda on the
    // diagonal, lambda_i*lambda_j off it
    const KernelFamily fam = family_exact_wigner({{1, 3}, {2, 2}}, 2);
    const StepKernel f1 = fam.kernel(1, 1), f2 = fam.kernel(1, 2);
    auto functional = [&](const StepKernel& a, const StepKernel& b) {
        const double m4 = wigner_moment(std::vector<StepKernel>{a, b, b, a}).value;
        const double m3 = wigner_moment(std::vector<StepKernel>{a, b, b}).value;
        return m4 - 2.0 * m3;
    };
    CHECK(functional(f1, f1) == doctest::Approx(2.0 * 9.0 - 3.0));
    CHECK(functional(f2, f2) == doctest::Approx(2.0 * 4.0 - 2.0));
    CHECK(functional(f1, f2) == doctest::Approx(3.0 * 2.0));
    CHECK(functional(f2, f1) == doctest::Approx(3.0 * 2.0));

    // same limit on the q = 1 Poisson side
    for (double lambda : {0.5, 2.0}) {
        const KernelFamily poi = family_poisson_spread(lambda, 1);
        const StepKernel f = poi.kernel(1, 1);
        const double m4 = poisson_moment(std::vector<StepKernel>(4, f)).value;
        const double m3 = poisson_moment(std::vector<StepKernel>(3, f)).value;
        CHECK(m4 - 2.0 * m3 == doctest::Approx(2.0 * lambda * lambda - lambda));
    }
}

TEST_CASE("contraction norms and moment errors shrink together") {
    // on the perturbed family the worst moment error tracks the worst
    // contraction-condition norm monotonically in n
    const KernelFamily fam = family_perturbed_wigner(family_exact_wigner({{1, 2}}, 2));
    const LimitSpec& spec = fam.target;
    double prev_delta = 1e300, prev_err = 1e300;
    for (int n : {8, 16, 32, 64}) {
        double delta = 0.0;
        for (const auto& rec : check_contraction_conditions(fam, 1, 1, n)) {
            if (rec.kind == "star") continue; // Wigner conditions only
            if (rec.kind == "arc" && rec.r == 1) continue; // q/2 slot is the fixed point
            delta = std::max(delta, rec.value);
        }
        double err = 0.0;
        const StepKernel f = fam.kernel(n, 1);
        for (int m = 2; m <= 5; ++m) {
            const double computed = wigner_moment(std::vector<StepKernel>(m, f)).value;
            err = std::max(err, std::abs(computed - target_moment(spec, std::vector<int>(m, 1))));
        }
        CHECK(delta < prev_delta);
        CHECK(err < prev_err);
        prev_delta = delta;
        prev_err = err;
    }
}

TEST_CASE("non-symmetric family kernels are rejected") {
    KernelFamily fam = family_exact_wigner({{1, 1}}, 2);
    fam.kernel = [](int, int) {
        StepKernel k(Grid(1.0, 2), 2);
        k.set({0, 1}, 1.0); // not mirror-invariant
        return k;
    };
    CHECK_THROWS_AS((void)check_contraction_conditions(fam, 1, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)check_fmt_conditions(fam, 1, 1, 1, Theorem::t2_7),
                    std::invalid_argument);
}

TEST_CASE("theorem names round trip") {
    for (Theorem t : {Theorem::t2_7, Theorem::t3_3, Theorem::t4_2, Theorem::t4_4})
        CHECK(theorem_from_string(to_string(t)) == t);
    CHECK_THROWS_AS((void)theorem_from_string("9.9"), std::invalid_argument);
}
