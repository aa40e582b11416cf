#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "freechaos/matrix_oracle.hpp"

using namespace freechaos;

TEST_CASE("semicircle estimates at reduced size") {
    SimConfig cfg;
    cfg.model = SimConfig::Model::semicircle;
    cfg.size = 80;
    cfg.trials = 40;
    cfg.seed = 9001;
    cfg.orders = {1, 2, 3, 4};
    const auto est = estimate_moments(cfg);
    REQUIRE(est.size() == 4);
    for (const auto& e : est) {
        CHECK(e.stderr_ > 0.0);
        CHECK(std::abs(e.estimate - e.target) <= 4.0 * e.stderr_);
    }
    CHECK(est[1].target == doctest::Approx(1.0));
    CHECK(est[3].target == doctest::Approx(2.0));
}

TEST_CASE("free poisson estimates at reduced size") {
    SimConfig cfg;
    cfg.model = SimConfig::Model::free_poisson;
    cfg.lambda = 1.0;
    cfg.size = 80;
    cfg.trials = 40;
    cfg.seed = 1234;
    const auto est = estimate_moments(cfg);
    REQUIRE(est.size() == 4);
    CHECK(est[0].target == doctest::Approx(1.0));
    CHECK(est[1].target == doctest::Approx(2.0));
    CHECK(est[2].target == doctest::Approx(5.0));
    CHECK(est[3].target == doctest::Approx(14.0));
    for (const auto& e : est) CHECK(std::abs(e.estimate - e.target) <= 4.0 * e.stderr_);
}

TEST_CASE("seed reproducibility and thread invariance") {
    SimConfig cfg;
    cfg.model = SimConfig::Model::semicircle;
    cfg.size = 24;
    cfg.trials = 10;
    cfg.seed = 42;
    cfg.orders = {2, 4};
    const auto a = estimate_moments(cfg);
    const auto b = estimate_moments(cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].estimate == b[k].estimate);
        CHECK(a[k].stderr_ == b[k].stderr_);
    }
    cfg.threads = 3;
    const auto c = estimate_moments(cfg);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].estimate == c[k].estimate);

    cfg.seed = 43;
    const auto d = estimate_moments(cfg);
    CHECK(d[0].estimate != a[0].estimate);
}

TEST_CASE("config validation") {
    SimConfig cfg;
    cfg.size = 1;
    CHECK_THROWS_AS((void)estimate_moments(cfg), std::invalid_argument);
    cfg.size = 10;
    cfg.trials = 0;
    CHECK_THROWS_AS((void)estimate_moments(cfg), std::invalid_argument);
    CHECK_THROWS_AS((void)model_from_string("wishart"), std::invalid_argument);
    CHECK(model_from_string("semicircle") == SimConfig::Model::semicircle);
}
