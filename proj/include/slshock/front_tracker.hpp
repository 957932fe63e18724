#ifndef SLSHOCK_FRONT_TRACKER_HPP
#define SLSHOCK_FRONT_TRACKER_HPP

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "slshock/dalembert.hpp"

namespace slshock {

/// One accepted point on the tracked front, with the boundary traces of the
/// wave field cached at (sigma+, t).
struct ShockState {
    double t = 0.0;
    double sigma = 0.0;
    double sigma_prime = 0.0;
    double N_plus = 0.0;     // chi_s(sigma+, t)
    double chit_plus = 0.0;  // chi_t(sigma+, t)
};

enum class Termination {
    reached_horizon,
    lax_failure,
    second_shock,
    tension_floor,
    threshold_time_reached,
    blow_up_certified,
};

std::string to_string(Termination t);

struct EventRecord {
    Termination type = Termination::reached_horizon;
    double t = 0.0;
    std::string detail;
};

struct TrackerOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double event_margin = 1e-9;      // numeric margin on the strict inequalities
    double guard_frac = 1e-9;        // stop at T(zeta) - guard_frac*T(zeta)
    double blow_up_radius_factor = 1e6;  // certify blow-up at sigma >= factor*sigma0
    double monitor_points_per_decade = 64.0;
    double monitor_span = 0.0;       // L; 0 = auto (4x outermost perturbation extent)
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0;       // 0 = auto
    std::vector<double> output_times;  // forced step endpoints (exact landings)
    double start_time = 0.0;           // restart support: resume the front ODE
    double start_sigma = 0.0;          // from (start_time, start_sigma); 0 = sigma0
};

struct DriftStats {
    double max_drift = 0.0;          // max |chi(sigma,t) - N1*sigma|
    double max_drift_rel = 0.0;      // same, over (1 + sigma)
    double min_lax_margin = std::numeric_limits<double>::infinity();  // min sigma' - 1
};

struct Trajectory {
    std::vector<ShockState> states;
    Termination termination = Termination::reached_horizon;
    std::optional<EventRecord> event;
    DriftStats drift;
    std::shared_ptr<const WaveField> field;
    std::shared_ptr<const InitialData> data;
    TrackerOptions options;

    double t_begin() const { return states.front().t; }
    double t_end() const { return states.back().t; }
    /// Cubic Hermite interpolation between accepted steps (stored sigma').
    ShockState interpolate(double t) const;
};

/// Right-hand side of the front ODE, chi_t(sigma,t) / (N1 - chi_s(sigma,t)).
/// Throws std::runtime_error when the denominator is not positive
/// (constitutive breakdown: the front meets a saturated region).
double step_rhs(const WaveField& field, double t, double sigma);

/// Track the front with an embedded Dormand-Prince 5(4) pair on the
/// regularized variable u = (sigma - sigma0) * (N1 - tau - zeta*t), checking
/// the continuation-failure events each accepted step and locating event
/// times by bisection.
Trajectory integrate(std::shared_ptr<const InitialData> data, double horizon,
                     const TrackerOptions& options = {});

/// sup and inf of chi_s(., t) over the moving monitor window [sigma, sigma+L]
/// plus the declared tail bound.
struct MonitorExtrema {
    double sup = 0.0;
    double inf = 0.0;
    double arg_sup = 0.0;
    double arg_inf = 0.0;
};

MonitorExtrema monitor_chi_s_extrema(const WaveField& field, double t, double sigma, double span,
                                     double points_per_decade);

double default_monitor_span(const InitialData& data);

struct ContinuationReport {
    bool sigma_finite = false;
    bool range_ok = false;  // eta < chi_s < N1 on [sigma, infinity)
    bool lax_ok = false;    // trace ratio > 1
    double sigma = 0.0;
    double trace_ratio = 0.0;
    double margin_to_N1 = 0.0;   // N1 - sup chi_s
    double margin_to_eta = 0.0;  // inf chi_s - eta
    bool pass = false;
};

ContinuationReport continuation_check(const Trajectory& traj, double t);

}  // namespace slshock

#endif
