#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "slshock/material.hpp"

using namespace slshock;

namespace {

MaterialParams base_params(ConstitutiveMode mode = ConstitutiveMode::stretch_linear) {
    MaterialParams p;
    p.N1 = 2.0;
    p.nu1 = 2.0;
    p.eta = 0.1;
    p.tau = 1.0;
    p.zeta = 0.0;
    p.gamma = 1.0;
    p.mode = mode;
    return p;
}

}  // namespace

TEST_CASE("stretch from tension, linear-in-stretch relation") {
    MaterialParams p = base_params();
    CHECK(stretch_from_tension(p, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(stretch_from_tension(p, 5.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(stretch_from_tension(p, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(stretch_from_tension(p, 0.0), std::domain_error);
    CHECK_THROWS_AS(stretch_from_tension(p, -1.0), std::domain_error);

    bool below = false;
    stretch_from_tension(p, 0.05, &below);
    CHECK(below);
    stretch_from_tension(p, 0.5, &below);
    CHECK_FALSE(below);
}

TEST_CASE("stretch from tension, linear-in-strain relation") {
    MaterialParams p = base_params(ConstitutiveMode::strain_linear);
    // E = N1/(nu1-1) = 2, e = N/E = 0.5, nu = 1.5 (hand value)
    CHECK(stretch_from_tension(p, 1.0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(stretch_from_tension(p, 5.0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("monotonicity and saturation plateau") {
    MaterialParams p = base_params();
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> dist(1e-6, 10.0);
    for (int i = 0; i < 2000; ++i) {
        double a = dist(rng);
        double b = dist(rng);
        if (a > b) std::swap(a, b);
        CHECK(stretch_from_tension(p, a) <= stretch_from_tension(p, b) + 1e-15);
    }
    // plateau on a log-spaced grid up to 1e6 * N1
    for (double f = 1.0; f <= 1e6; f *= 1.7) {
        CHECK(stretch_from_tension(p, p.N1 * f) == p.nu1);
    }
    // identity band in gamma = E = 1 units: nu = N on [eta, N1]
    for (double N = p.eta; N <= p.N1; N += 0.05) {
        CHECK(stretch_from_tension(p, N) == doctest::Approx(N).epsilon(1e-15));
    }
}

TEST_CASE("nondimensionalization") {
    SUBCASE("identity when gamma = E = 1") {
        MaterialParams p = base_params();
        NondimensionalParams nd = nondimensionalize(p);
        CHECK(nd.N1 == doctest::Approx(2.0));
        CHECK(nd.N1 == doctest::Approx(p.nu1));  // threshold collapses onto nu1
        CHECK(nd.scales.time == doctest::Approx(1.0));
        CHECK(nd.scales.force == doctest::Approx(1.0));
    }
    SUBCASE("gamma = 4 scales time by sqrt(gamma/E) = 2") {
        MaterialParams p = base_params();
        p.gamma = 4.0;
        NondimensionalParams nd = nondimensionalize(p);
        CHECK(nd.scales.time == doctest::Approx(2.0).epsilon(1e-15));
        // characteristic speed is 1 after rescaling: length/time scales agree
        double wave_speed = std::sqrt(p.stiffness() / p.gamma);
        CHECK(wave_speed * nd.scales.time / nd.scales.length == doctest::Approx(1.0));
    }
    SUBCASE("stiff material: force unit rescales so E = 1") {
        MaterialParams p = base_params();
        p.N1 = 6.0;
        p.nu1 = 1.5;  // E = 4
        p.tau = 2.0;
        p.eta = 0.5;
        NondimensionalParams nd = nondimensionalize(p);
        CHECK(nd.scales.force == doctest::Approx(4.0));
        CHECK(nd.N1 == doctest::Approx(1.5));
        CHECK(nd.N1 == doctest::Approx(p.nu1));
    }
    SUBCASE("strain mode: rescaled threshold is nu1 - 1") {
        MaterialParams p = base_params(ConstitutiveMode::strain_linear);
        NondimensionalParams nd = nondimensionalize(p);
        CHECK(nd.N1 == doctest::Approx(p.nu1 - 1.0));
    }
    SUBCASE("round-trip to 1e-14 relative") {
        MaterialParams p = base_params();
        p.N1 = 3.7;
        p.nu1 = 1.9;
        p.eta = 0.3;
        p.tau = 1.1;
        p.zeta = 0.25;
        p.gamma = 2.6;
        NondimensionalParams nd = nondimensionalize(p);
        MaterialParams back = redimensionalize(nd, p.nu1);
        CHECK(back.N1 == doctest::Approx(p.N1).epsilon(1e-14));
        CHECK(back.eta == doctest::Approx(p.eta).epsilon(1e-14));
        CHECK(back.tau == doctest::Approx(p.tau).epsilon(1e-14));
        CHECK(back.zeta == doctest::Approx(p.zeta).epsilon(1e-14));
        CHECK(back.gamma == doctest::Approx(p.gamma).epsilon(1e-14));
    }
}

TEST_CASE("time of threshold") {
    MaterialParams p = base_params();
    p.zeta = 1.0;
    CHECK(time_of_threshold(p) == doctest::Approx(1.0));
    p.zeta = 0.5;
    CHECK(time_of_threshold(p) == doctest::Approx(2.0));
    p.zeta = 0.0;
    CHECK(std::isinf(time_of_threshold(p)));
}

TEST_CASE("parameter validation") {
    MaterialParams p = base_params();
    p.nu1 = 1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = base_params();
    p.eta = 1.5;  // eta >= tau
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = base_params();
    p.tau = 2.5;  // tau >= N1
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = base_params();
    p.gamma = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
