#ifndef SLSHOCK_MATERIAL_HPP
#define SLSHOCK_MATERIAL_HPP

#include <string>

namespace slshock {

/// Which variable the constitutive relation is linear in below the
/// inextensibility threshold: the stretch nu itself, or the strain nu - 1.
enum class ConstitutiveMode { stretch_linear, strain_linear };

/// Physical configuration of a run, in dimensional units.
///
/// The stretch saturates at nu1 once the tension reaches N1; below the
/// threshold the relation is linear with stiffness E = N1/nu1
/// (stretch_linear) or E = N1/(nu1 - 1) (strain_linear). The end at
/// infinity is pulled with tension zeta*t + tau.
struct MaterialParams {
    double N1 = 2.0;    // inextensibility tension threshold, > 0
    double nu1 = 2.0;   // maximal stretch, > 1
    double eta = 0.1;   // lower tension bound of the linear band, 0 <= eta < tau
    double tau = 1.0;   // initial end tension, eta < tau < N1
    double zeta = 0.0;  // end-tension ramp rate, >= 0
    double gamma = 1.0; // mass density, > 0
    ConstitutiveMode mode = ConstitutiveMode::stretch_linear;

    double stiffness() const;  // derived E
    void validate() const;     // throws std::invalid_argument
};

/// Unit scales that map a nondimensional quantity back to dimensional form
/// (dimensional = nondimensional * scale).
struct ScaleFactors {
    double length = 1.0;
    double time = 1.0;
    double force = 1.0;
};

/// Parameters after rescaling units so that gamma = E = 1 (unit wave speed).
/// In stretch_linear mode the rescaled threshold equals nu1; in strain
/// mode it equals nu1 - 1 and the tracked variable is chi - s.
struct NondimensionalParams {
    double N1 = 2.0;
    double eta = 0.1;
    double tau = 1.0;
    double zeta = 0.0;
    ConstitutiveMode mode = ConstitutiveMode::stretch_linear;
    ScaleFactors scales;

    void validate() const;
};

/// Stretch as a function of tension. Requires N > 0 (tensile state);
/// evaluations below the calibrated band [eta, N1] use the linear
/// continuation and set *below_band when a flag is supplied.
double stretch_from_tension(const MaterialParams& p, double N, bool* below_band = nullptr);

/// Rescale units so gamma = E = 1. Round-trips through the recorded
/// scale factors to relative 1e-14.
NondimensionalParams nondimensionalize(const MaterialParams& p);

/// Inverse of nondimensionalize given the recorded scale factors.
MaterialParams redimensionalize(const NondimensionalParams& nd, double nu1);

/// Time at which the prescribed end tension reaches the threshold N1:
/// (N1 - tau)/zeta for zeta > 0, infinity for zeta = 0.
double time_of_threshold(const MaterialParams& p);
double time_of_threshold(const NondimensionalParams& p);

std::string to_string(ConstitutiveMode m);
ConstitutiveMode constitutive_mode_from_string(const std::string& s);

}  // namespace slshock

#endif
