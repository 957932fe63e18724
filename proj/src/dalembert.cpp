#include "slshock/dalembert.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace slshock {

WaveField::WaveField(std::shared_ptr<const InitialData> data) : data_(std::move(data)) {
    if (!data_) throw std::invalid_argument("WaveField: null initial data");
    // touch the antiderivative once so cached tables are built here and the
    // field is read-only afterwards
    (void)data_->chi1.cumulative(data_->sigma0 + 1.0);
}

void WaveField::check_domain(double s, double t) const {
    if (!(t >= 0.0) || !(s - t >= data_->sigma0 - 1e-12)) {
        throw std::domain_error("WaveField: (s, t) = (" + std::to_string(s) + ", " +
                                std::to_string(t) +
                                ") outside the dependence domain s - t >= sigma0");
    }
}

// The affine parts of chi0 and chi1 propagate through the formula in closed
// form; only the bump deviations are sampled at s +/- t. Keeping the two
// contributions separate avoids catastrophic cancellation when the front
// sits at large s near blow-up.
FieldValue WaveField::eval(double s, double t) const {
    check_domain(s, t);
    const auto& d = *data_;
    const auto& p = d.params;
    double sp = s + t;
    double sm = std::max(s - t, d.sigma0);
    double c1 = d.chi1.affine().value_at_ref;  // sigma1 * (N1 - tau) level

    double v0p = d.chi0.dev_value(sp);
    double v0m = d.chi0.dev_value(sm);
    double d0p = d.chi0.dev_deriv(sp);
    double d0m = d.chi0.dev_deriv(sm);
    double v1p = d.chi1.dev_value(sp);
    double v1m = d.chi1.dev_value(sm);

    FieldValue v;
    v.chi_s_dev = 0.5 * (d0p + d0m) + 0.5 * (v1p - v1m);
    v.chi_t_dev = 0.5 * (d0p - d0m) + 0.5 * (v1p + v1m);
    v.chi_s = (p.tau + p.zeta * t) + v.chi_s_dev;
    v.chi_t = (c1 + p.zeta * (s - d.sigma0)) + v.chi_t_dev;
    double affine_chi = p.N1 * d.sigma0 + p.tau * (s - d.sigma0) +
                        t * (c1 + p.zeta * (s - d.sigma0));
    v.chi = affine_chi + 0.5 * (v0p + v0m) +
            0.5 * (d.chi1.dev_cumulative(sp) - d.chi1.dev_cumulative(sm));
    return v;
}

SecondDerivs WaveField::eval_second(double s, double t) const {
    check_domain(s, t);
    const auto& d = *data_;
    double sp = s + t;
    double sm = std::max(s - t, d.sigma0);
    double dd0p = d.chi0.deriv2(sp);
    double dd0m = d.chi0.deriv2(sm);
    double d1p = d.chi1.dev_deriv(sp);
    double d1m = d.chi1.dev_deriv(sm);
    SecondDerivs v;
    v.chi_ss = 0.5 * (dd0p + dd0m) + 0.5 * (d1p - d1m);
    v.chi_st_dev = 0.5 * (dd0p - dd0m) + 0.5 * (d1p + d1m);
    v.chi_st = d.params.zeta + v.chi_st_dev;
    return v;
}

double WaveField::cumulative_chi1(double x) const { return data_->chi1_cumulative(x); }

}  // namespace slshock
