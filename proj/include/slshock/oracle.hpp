#ifndef SLSHOCK_ORACLE_HPP
#define SLSHOCK_ORACLE_HPP

#include "slshock/state_energy.hpp"

namespace slshock {

/// The two-parameter family of piece-wise constant stretched motions;
/// every state variable has a closed form on [0, T(zeta)).
struct OracleMotion {
    NondimensionalParams params;
    double sigma0 = 1.0;
    double sigma1 = 2.0;
};

struct OracleFront {
    double sigma = 0.0;
    double sigma_prime = 0.0;
};

/// Front position and speed:
///   sigma = sigma0 + sigma1 (N1-tau) t / (N1 - (zeta t + tau)),
///   sigma' = sigma1 (N1-tau)^2 / (N1 - (zeta t + tau))^2.
OracleFront oracle_front(const OracleMotion& m, double t);

/// Full state sample of the closed-form motion.
StateSample oracle_state(const OracleMotion& m, double s, double t);

/// The left-hand sides of the orbital-stability estimates at time t,
/// computed against the reference motion (usually built with
/// sigma1 = sigma1_infinity of the data). r is the declared decay rate;
/// the weight power is r+1 for zeta = 0 and r+2 for zeta > 0.
struct DeviationRecord {
    double t = 0.0;
    double weighted_second_sup = 0.0;    // sup s^{r+p} (|chi_ss| + |chi_st|)
    double chis_dev_sup = 0.0;           // sup |chi_s - (zeta t + tau)|
    double chit_dev_sup = 0.0;           // sup |chi_t - reference velocity|
    double state_dev_sup = 0.0;          // sup of the summed state deviation
    double speed_ratio_dev = 0.0;        // |sigma'/reference - 1|
    double inext_tension_ratio_dev = 0.0;
    double r = 0.0;
};

DeviationRecord asymptotic_deviation(const Trajectory& traj, const OracleMotion& ref, double t,
                                     double r);

}  // namespace slshock

#endif
