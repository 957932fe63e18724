#ifndef SLSHOCK_FV_HPP
#define SLSHOCK_FV_HPP

#include <vector>

#include "slshock/profiles.hpp"

namespace slshock {

/// Shock-capturing finite-volume solver for the first-order system
///   w_t - v_s = 0,  v_t - N_s = 0,  (w, v) = (chi_s, chi_t),
/// with the stretch-limited closure: a cell is either extensible (N = w,
/// w < nu1) or saturated (w = nu1, N >= N1 a stored multiplier). Interface
/// fluxes come from the exact Riemann solution of the constrained system;
/// a saturation shock carries the middle-state tension
///   N_m = w_R + (v_R - v_L)^2 / (nu1 - w_R),
/// which is how an overshoot in w is converted into tension through the
/// momentum flux. First order by construction; independent cross-check of
/// the semi-analytic tracker, not an accuracy competitor.
struct FvOptions {
    double ds = 1e-3;
    double S = 5.0;               // truncated domain [0, S]
    double t_end = 1.0;
    double cfl = 0.45;
    double boundary_margin = 0.2; // S*margin kept outside the front's influence
    std::vector<double> snapshot_times;
    double front_sample_dt = 0.01;
    double w_tolerance = 1e-9;    // admissible overshoot above nu1 in stored states
};

struct FvSnapshot {
    double t = 0.0;
    std::vector<double> s, v, w, N;
};

struct FvFrontPoint {
    double t = 0.0;
    double position = 0.0;
    double speed_est = 0.0;   // local jump-based speed estimate
    double N_ahead = 0.0;     // tension sampled ahead of the captured front
    double v_ahead = 0.0;     // velocity sampled ahead of the captured front
    double N_block = 0.0;     // tension in the wall-attached block
};

struct FvEnergyPoint {
    double t = 0.0;
    double total = 0.0;          // discrete K + E over the domain
    double boundary_power = 0.0; // N*v at the right boundary
};

struct FvResult {
    std::vector<FvFrontPoint> front;
    std::vector<FvSnapshot> snapshots;
    std::vector<FvEnergyPoint> energy;
    std::size_t steps = 0;
    double max_wave_speed = 0.0;
    std::size_t riemann_fallbacks = 0;  // receding-block interfaces encountered
};

FvResult fv_run(const InitialData& data, const FvOptions& options);

}  // namespace slshock

#endif
