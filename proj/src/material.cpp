#include "slshock/material.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace slshock {

double MaterialParams::stiffness() const {
    return mode == ConstitutiveMode::stretch_linear ? N1 / nu1 : N1 / (nu1 - 1.0);
}

void MaterialParams::validate() const {
    if (!(N1 > 0.0)) throw std::invalid_argument("MaterialParams: N1 must be > 0");
    if (!(nu1 > 1.0)) throw std::invalid_argument("MaterialParams: nu1 must be > 1");
    if (!(gamma > 0.0)) throw std::invalid_argument("MaterialParams: gamma must be > 0");
    if (!(zeta >= 0.0)) throw std::invalid_argument("MaterialParams: zeta must be >= 0");
    if (!(eta >= 0.0 && eta < tau)) {
        throw std::invalid_argument("MaterialParams: need 0 <= eta < tau");
    }
    if (!(tau < N1)) throw std::invalid_argument("MaterialParams: need tau < N1");
}

void NondimensionalParams::validate() const {
    if (!(N1 > 0.0)) throw std::invalid_argument("NondimensionalParams: N1 must be > 0");
    if (!(zeta >= 0.0)) throw std::invalid_argument("NondimensionalParams: zeta must be >= 0");
    if (!(eta >= 0.0 && eta < tau && tau < N1)) {
        throw std::invalid_argument("NondimensionalParams: need 0 <= eta < tau < N1");
    }
}

double stretch_from_tension(const MaterialParams& p, double N, bool* below_band) {
    if (!(N > 0.0)) {
        throw std::domain_error("stretch_from_tension: tension must be positive");
    }
    if (below_band) *below_band = N < p.eta;
    double e = N / p.stiffness();
    if (p.mode == ConstitutiveMode::stretch_linear) {
        return std::min(e, p.nu1);
    }
    return 1.0 + std::min(e, p.nu1 - 1.0);
}

NondimensionalParams nondimensionalize(const MaterialParams& p) {
    p.validate();
    double E = p.stiffness();
    NondimensionalParams nd;
    nd.mode = p.mode;
    nd.scales.length = 1.0;
    nd.scales.force = E;
    nd.scales.time = std::sqrt(p.gamma / E);
    nd.N1 = p.N1 / E;
    nd.eta = p.eta / E;
    nd.tau = p.tau / E;
    nd.zeta = p.zeta * nd.scales.time / E;
    nd.validate();
    return nd;
}

MaterialParams redimensionalize(const NondimensionalParams& nd, double nu1) {
    MaterialParams p;
    p.mode = nd.mode;
    p.nu1 = nu1;
    double E = nd.scales.force;
    p.N1 = nd.N1 * E;
    p.eta = nd.eta * E;
    p.tau = nd.tau * E;
    p.zeta = nd.zeta * E / nd.scales.time;
    p.gamma = E * nd.scales.time * nd.scales.time;
    return p;
}

double time_of_threshold(const MaterialParams& p) {
    if (p.zeta == 0.0) return std::numeric_limits<double>::infinity();
    return (p.N1 - p.tau) / p.zeta;
}

double time_of_threshold(const NondimensionalParams& p) {
    if (p.zeta == 0.0) return std::numeric_limits<double>::infinity();
    return (p.N1 - p.tau) / p.zeta;
}

std::string to_string(ConstitutiveMode m) {
    return m == ConstitutiveMode::stretch_linear ? "stretch_linear" : "strain_linear";
}

ConstitutiveMode constitutive_mode_from_string(const std::string& s) {
    if (s == "stretch_linear") return ConstitutiveMode::stretch_linear;
    if (s == "strain_linear") return ConstitutiveMode::strain_linear;
    throw std::invalid_argument("unknown constitutive mode: " + s);
}

}  // namespace slshock
