#ifndef SLSHOCK_DALEMBERT_HPP
#define SLSHOCK_DALEMBERT_HPP

#include <memory>

#include "slshock/profiles.hpp"

namespace slshock {

struct FieldValue {
    double chi = 0.0;
    double chi_s = 0.0;
    double chi_t = 0.0;
    /// Deviations from the affine far field, computed without cancellation:
    /// chi_s_dev = chi_s - (zeta t + tau);
    /// chi_t_dev = chi_t - (zeta (s - sigma0) + c1), c1 the chi1 affine level.
    double chi_s_dev = 0.0;
    double chi_t_dev = 0.0;
};

struct SecondDerivs {
    double chi_ss = 0.0;
    double chi_st = 0.0;
    double chi_st_dev = 0.0;  // chi_st - zeta
};

/// Exact extensible-region wave field reconstructed from the initial data:
///   chi(s,t) = (chi0(s+t) + chi0(s-t))/2 + (C(s+t) - C(s-t))/2,
/// with C the cached antiderivative of chi1. Valid on the dependence domain
/// t >= 0, s - t >= sigma0; queries outside it throw std::domain_error so
/// front-tracking bugs surface instead of being silently extended.
class WaveField {
public:
    explicit WaveField(std::shared_ptr<const InitialData> data);

    FieldValue eval(double s, double t) const;
    SecondDerivs eval_second(double s, double t) const;

    /// int_{sigma0}^{x} chi1 for x >= sigma0.
    double cumulative_chi1(double x) const;

    const InitialData& data() const { return *data_; }
    std::shared_ptr<const InitialData> data_ptr() const { return data_; }

private:
    void check_domain(double s, double t) const;
    std::shared_ptr<const InitialData> data_;
};

}  // namespace slshock

#endif
