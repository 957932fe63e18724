#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "slshock/state_energy.hpp"

using namespace slshock;

namespace {

NondimensionalParams nd_params(double zeta = 0.0) {
    NondimensionalParams p;
    p.N1 = 2.0;
    p.eta = 0.1;
    p.tau = 1.0;
    p.zeta = zeta;
    return p;
}

std::shared_ptr<const InitialData> make_data(double zeta, const PerturbationSpec& p0 = {},
                                             const PerturbationSpec& p1 = {}) {
    return std::make_shared<InitialData>(
        make_constant_stretch_data(nd_params(zeta), 1.0, 2.0, p0, p1));
}

PerturbationSpec rational(double a, double c, double w, double q) {
    PerturbationSpec b;
    b.kind = PerturbationKind::rational_bump;
    b.amplitude = a;
    b.center = c;
    b.width = w;
    b.decay_order = q;
    return b;
}

std::vector<double> uniform_grid(double t0, double t1, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = t0 + (t1 - t0) * i / (n - 1.0);
    return g;
}

}  // namespace

TEST_CASE("state samples on the unperturbed zeta = 0 family") {
    Trajectory traj = integrate(make_data(0.0), 10.0);
    // behind the front: N = 1 + 4*(2-1) = 5, chi = N1 s, at rest
    for (double t : {0.3, 1.0, 4.2}) {
        StateSample s = sample_state(traj, 0.5, t);
        CHECK(s.region == Region::inextensible);
        CHECK(s.N == doctest::Approx(5.0).epsilon(1e-9));
        CHECK(s.chi == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(s.chit == 0.0);
        CHECK(s.nu == doctest::Approx(2.0));
    }
    // ahead of the front at t = 1: chi = s + 1 + 2t
    StateSample s = sample_state(traj, 5.0, 1.0);
    CHECK(s.region == Region::extensible);
    CHECK(s.N == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.chi == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(s.chit == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("ramped family: inextensible tension at t = 0.5 is 33.5") {
    TrackerOptions opts;
    opts.output_times = {0.5};
    Trajectory traj = integrate(make_data(1.0), 0.75, opts);
    StateSample s = sample_state(traj, 0.0, 0.5);
    CHECK(s.region == Region::inextensible);
    CHECK(s.N == doctest::Approx(33.5).epsilon(1e-8));
}

TEST_CASE("tension gap across the front") {
    auto data = make_data(0.0, rational(0.02, 1.0, 2.0, 1.0), rational(0.02, 2.0, 1.0, 1.0));
    Trajectory traj = integrate(data, 20.0);
    for (const auto& st : traj.states) {
        double N_minus = st.N_plus + st.sigma_prime * st.sigma_prime * (2.0 - st.N_plus);
        CHECK(N_minus > 2.0);
        CHECK(st.N_plus < 2.0);
    }
}

TEST_CASE("rh residual") {
    SUBCASE("vanishes identically on the exact family") {
        Trajectory traj = integrate(make_data(0.0), 10.0);
        for (double t : {0.0, 1.0, 3.7, 9.3}) {
            CHECK(std::abs(rh_residual(traj, t)) <= 1e-12);
        }
    }
    SUBCASE("small on perturbed runs, zero at t = 0 by construction") {
        auto data = make_data(0.0, rational(0.03, 1.0, 2.0, 2.0),
                              rational(0.03, 3.0, 1.0, 2.0));
        Trajectory traj = integrate(data, 10.0);
        CHECK(std::abs(rh_residual(traj, 0.0)) <= 1e-12);
        for (const auto& st : traj.states) {
            double N_minus = st.N_plus + st.sigma_prime * st.sigma_prime * (2.0 - st.N_plus);
            double res = std::abs(rh_residual(traj, st.t));
            CHECK(res <= 1e-8 * (1.0 + std::abs(st.N_plus - N_minus)));
        }
    }
}

TEST_CASE("consistency of the two shock-speed expressions") {
    auto data = make_data(0.0, rational(0.02, 1.0, 2.0, 1.0), {});
    Trajectory traj = integrate(data, 10.0);
    for (const auto& st : traj.states) {
        double ratio = st.chit_plus / (2.0 - st.N_plus);
        CHECK(std::abs(ratio / st.sigma_prime - 1.0) <= 1e-9);
    }
}

TEST_CASE("energy audit of the exact family: Q = -3 and tight balance") {
    TrackerOptions opts;
    auto grid = uniform_grid(0.2, 9.8, 200);
    opts.output_times = grid;
    Trajectory traj = integrate(make_data(0.0), 10.0, opts);
    EnergyAudit audit = energy_audit(traj, 0.5, 25.0, grid);
    CHECK(audit.entropy_ok);
    for (const auto& row : audit.rows) {
        CHECK(row.Q == doctest::Approx(-3.0).epsilon(1e-10));
        CHECK(row.P == doctest::Approx(2.0).epsilon(1e-10));
    }
    CHECK(audit.max_defect <= 1e-6 * audit.max_defect_scale);
}

TEST_CASE("energy audit on a perturbed run stays within the defect budget") {
    auto data = make_data(0.0, rational(0.02, 1.0, 2.0, 2.0), rational(0.02, 4.0, 1.5, 2.0));
    TrackerOptions opts;
    auto grid = uniform_grid(0.2, 9.8, 200);
    opts.output_times = grid;
    Trajectory traj = integrate(data, 10.0, opts);
    EnergyAudit audit = energy_audit(traj, 0.5, 25.0, grid);
    CHECK(audit.entropy_ok);
    for (const auto& row : audit.rows) CHECK(row.Q < 0.0);
    CHECK(audit.max_defect <= 1e-6 * audit.max_defect_scale);
}

TEST_CASE("smooth-segment audit conserves energy without a heat term") {
    auto data = make_data(0.0, {}, rational(0.05, 6.0, 1.5, 2.0));
    TrackerOptions opts;
    auto grid = uniform_grid(0.1, 2.9, 120);
    opts.output_times = grid;
    Trajectory traj = integrate(data, 3.0, opts);
    // front stays at sigma ~ 1 + 2t <= 7; audit a window fully ahead of it
    EnergyAudit audit = energy_audit(traj, 20.0, 40.0, grid);
    CHECK_FALSE(audit.shock_inside);
    for (const auto& row : audit.rows) CHECK(row.Q == 0.0);
    CHECK(audit.max_defect <= 1e-8 * audit.max_defect_scale);
}

TEST_CASE("strain-linear runs report physical stretch and position") {
    // normalized strain system: threshold N1 = nu1 - 1; the tracked field is
    // the displacement chi - s
    MaterialParams mp;
    mp.N1 = 2.0;
    mp.nu1 = 2.0;  // E = 2, normalized threshold 1.0
    mp.eta = 0.1;
    mp.tau = 1.2;  // normalized tau = 0.6
    mp.mode = ConstitutiveMode::strain_linear;
    NondimensionalParams nd = nondimensionalize(mp);
    CHECK(nd.N1 == doctest::Approx(1.0));
    auto data = std::make_shared<InitialData>(make_constant_stretch_data(nd, 1.0, 2.0));
    Trajectory traj = integrate(data, 2.0);
    StateSample behind = sample_state(traj, 0.25, 1.0);
    CHECK(behind.nu == doctest::Approx(2.0));           // saturated stretch nu1
    CHECK(behind.chi == doctest::Approx(2.0 * 0.25));   // chi = nu1 * s
    ShockState f = traj.interpolate(1.0);
    StateSample ahead = sample_state(traj, f.sigma + 2.0, 1.0);
    CHECK(ahead.nu == doctest::Approx(1.0 + ahead.N));  // strain relation
}

TEST_CASE("audit preconditions") {
    Trajectory traj = integrate(make_data(0.0), 5.0);
    auto grid = uniform_grid(0.5, 4.5, 50);
    // front crosses b = 3 during [0.5, 4.5]
    CHECK_THROWS_AS(energy_audit(traj, 0.5, 3.0, grid), std::invalid_argument);
    // non-uniform grid
    std::vector<double> bad = {0.5, 0.7, 1.0, 1.1, 2.0};
    CHECK_THROWS_AS(energy_audit(traj, 0.5, 25.0, bad), std::invalid_argument);
    // t beyond the trajectory
    CHECK_THROWS_AS(sample_state(traj, 1.0, 7.0), std::out_of_range);
}
