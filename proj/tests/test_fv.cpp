#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "slshock/fv.hpp"

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

InitialData oracle_data(double zeta = 0.0) {
    return make_constant_stretch_data(nd_params(zeta), 1.0, 2.0);
}

double front_error_max(const FvResult& fv) {
    double worst = 0.0;
    for (const auto& f : fv.front) {
        worst = std::max(worst, std::abs(f.position - (1.0 + 2.0 * f.t)));
    }
    return worst;
}

}  // namespace

TEST_CASE("captured front follows the exact family") {
    FvOptions opt;
    opt.ds = 5e-3;
    opt.S = 5.0;
    opt.t_end = 1.0;
    opt.snapshot_times = {0.5, 1.0};
    FvResult fv = fv_run(oracle_data(), opt);
    CHECK(front_error_max(fv) <= 5.0 * opt.ds);
    // post-shock tension plateau within 2% of 5
    const FvSnapshot& snap = fv.snapshots.back();
    double sigma = 1.0 + 2.0 * snap.t;
    for (std::size_t i = 0; i < snap.s.size(); ++i) {
        if (snap.s[i] > 0.3 && snap.s[i] < sigma - 10.0 * opt.ds) {
            CHECK(std::abs(snap.N[i] - 5.0) / 5.0 <= 0.02);
            CHECK(snap.w[i] == doctest::Approx(2.0));
            CHECK(std::abs(snap.v[i]) <= 1e-9);
        }
        if (snap.s[i] > sigma + 10.0 * opt.ds) {
            CHECK(snap.N[i] == doctest::Approx(1.0).epsilon(1e-6));
            CHECK(snap.v[i] == doctest::Approx(2.0).epsilon(1e-6));
        }
    }
}

TEST_CASE("halving the cell width at least halves the front error") {
    FvOptions coarse;
    coarse.ds = 1e-2;
    coarse.S = 4.0;
    coarse.t_end = 0.5;
    FvOptions fine = coarse;
    fine.ds = 5e-3;
    double e1 = front_error_max(fv_run(oracle_data(), coarse));
    double e2 = front_error_max(fv_run(oracle_data(), fine));
    CHECK(e2 <= 0.75 * e1);
}

TEST_CASE("discrete energy decays up to the boundary power") {
    FvOptions opt;
    opt.ds = 5e-3;
    opt.S = 5.0;
    opt.t_end = 1.0;
    FvResult fv = fv_run(oracle_data(), opt);
    REQUIRE(fv.energy.size() >= 10);
    for (std::size_t i = 1; i < fv.energy.size(); ++i) {
        const auto& e0 = fv.energy[i - 1];
        const auto& e1 = fv.energy[i];
        double dt = e1.t - e0.t;
        if (dt <= 0.0) continue;
        double dE = (e1.total - e0.total) / dt;
        double P = 0.5 * (e0.boundary_power + e1.boundary_power);
        // non-increasing up to boundary power, 1% per unit time allowance
        CHECK(dE <= P + 0.01 * std::max(1.0, std::abs(P)));
    }
}

TEST_CASE("captured jumps satisfy the RH relation within 5%") {
    FvOptions opt;
    opt.ds = 5e-3;
    opt.S = 5.0;
    opt.t_end = 1.0;
    FvResult fv = fv_run(oracle_data(), opt);
    // fitted front speed over the second half
    std::size_t n = fv.front.size();
    double t0 = fv.front[n / 2].t;
    double s0 = fv.front[n / 2].position;
    double t1 = fv.front.back().t;
    double s1 = fv.front.back().position;
    double speed = (s1 - s0) / (t1 - t0);
    const auto& last = fv.front.back();
    double jump_N = last.N_ahead - last.N_block;
    double jump_v = last.v_ahead - 0.0;
    double residual = jump_N + speed * jump_v;
    CHECK(std::abs(residual) <= 0.05 * std::abs(jump_N));
}

TEST_CASE("preconditions") {
    SUBCASE("domain too small for the front's influence region") {
        FvOptions opt;
        opt.ds = 1e-2;
        opt.S = 3.0;  // sigma(1) + 1 = 4 > 0.8*S
        opt.t_end = 1.0;
        CHECK_THROWS_AS(fv_run(oracle_data(), opt), std::invalid_argument);
    }
    SUBCASE("running into the threshold time is rejected") {
        FvOptions opt;
        opt.ds = 1e-2;
        opt.S = 40.0;
        opt.t_end = 0.9;  // T(zeta) = 1, limit is 0.8
        CHECK_THROWS_AS(fv_run(oracle_data(1.0), opt), std::invalid_argument);
    }
}

TEST_CASE("ramped end tension run stays consistent up to 0.5 T") {
    FvOptions opt;
    opt.ds = 5e-3;
    opt.S = 6.0;
    opt.t_end = 0.5;
    opt.snapshot_times = {0.5};
    FvResult fv = fv_run(oracle_data(1.0), opt);
    double worst = 0.0;
    for (const auto& f : fv.front) {
        double sigma = 1.0 + 2.0 * f.t / (1.0 - f.t);
        worst = std::max(worst, std::abs(f.position - sigma));
    }
    CHECK(worst <= 8.0 * opt.ds);
    // tension ahead of the front tracks zeta t + tau
    const FvSnapshot& snap = fv.snapshots.back();
    double sigma = 1.0 + 2.0 * snap.t / (1.0 - snap.t);
    for (std::size_t i = 0; i < snap.s.size(); ++i) {
        if (snap.s[i] > sigma + 0.3 && snap.s[i] < opt.S - 1.0) {
            CHECK(snap.N[i] == doctest::Approx(snap.t + 1.0).epsilon(5e-3));
        }
    }
}
