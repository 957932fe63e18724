#ifndef SLSHOCK_STATE_ENERGY_HPP
#define SLSHOCK_STATE_ENERGY_HPP

#include <vector>

#include "slshock/front_tracker.hpp"

namespace slshock {

enum class Region { inextensible, extensible };

struct StateSample {
    double s = 0.0;
    double t = 0.0;
    Region region = Region::extensible;
    double chi = 0.0;
    double nu = 0.0;
    double N = 0.0;
    double chit = 0.0;
};

/// Full state at a material point: wave field ahead of the front,
/// rigid-segment closed formulas behind it (interpolated front data).
StateSample sample_state(const Trajectory& traj, double s, double t);

/// Rankine-Hugoniot residual [[N]] + sigma' [[chi_t]] from independently
/// reconstructed traces; vanishes identically on exact solutions.
double rh_residual(const Trajectory& traj, double t);

struct EnergyLedger {
    double t = 0.0;
    double K = 0.0;
    double E_stored = 0.0;
    double P = 0.0;
    double Q = 0.0;
};

struct EnergyAudit {
    std::vector<EnergyLedger> rows;
    /// |d(K+E)/dt - P - Q| by 4th-order central differences (interior rows).
    std::vector<double> defects;
    double max_defect = 0.0;
    double max_defect_scale = 1.0;  // max(|P|, |Q|, 1) at the worst row
    bool entropy_ok = true;         // Q < 0 at every audited time (shock mode)
    bool shock_inside = true;       // a < sigma(t) < b mode vs all-extensible mode
};

/// Energy/dissipation bookkeeping for the material segment [a, b] on a
/// uniform time grid. Requires the front either strictly inside (a, b) for
/// all grid times (shock mode) or strictly left of a (smooth mode).
EnergyAudit energy_audit(const Trajectory& traj, double a, double b,
                         const std::vector<double>& t_grid);

}  // namespace slshock

#endif
