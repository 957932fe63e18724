#ifndef SLSHOCK_PROFILES_HPP
#define SLSHOCK_PROFILES_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "slshock/material.hpp"
#include "slshock/numerics.hpp"

namespace slshock {

/// Perturbation families applied on top of the constant-stretch base data.
/// rational_bump decays like s^-q; compact_bump and plateau_bump have exact
/// support [center - width, center + width]; tabulated reads a compactly
/// supported profile from a two-column file.
enum class PerturbationKind { none, rational_bump, compact_bump, plateau_bump, tabulated };

struct PerturbationSpec {
    PerturbationKind kind = PerturbationKind::none;
    double amplitude = 0.0;
    double center = 0.0;
    double width = 1.0;
    double decay_order = 2.0;  // q > 0, rational_bump only
    double inner_width = 0.0;  // plateau_bump: flat part is [center -/+ inner_width]
    std::string table_path;    // tabulated only
};

/// Power-law decay bound |f(s)| <= coeff * s^-order for s >= start;
/// compact terms vanish identically beyond start. limit_coeff is the exact
/// asymptotic coefficient lim s^order * |f(s)| (coeff is a safe upper bound).
struct DecayBound {
    double order = 0.0;
    double coeff = 0.0;
    double start = 0.0;
    bool compact = false;
    double limit_coeff = 0.0;

    double at(double s) const;
    /// Exact limit of s^power * |f(s)| as s -> infinity (0, finite, or inf).
    double weighted_limit(double power) const;
};

/// One bump term with closed-form value/derivatives and an antiderivative
/// (closed form where available, cached quadrature otherwise).
class Bump {
public:
    static Bump make(const PerturbationSpec& spec, double domain_start);

    double value(double s) const;
    double deriv(double s) const;
    double deriv2(double s) const;
    /// int_{domain_start}^{s} value.
    double cumulative(double s) const;

    DecayBound value_decay() const { return value_decay_; }
    DecayBound deriv_decay() const { return deriv_decay_; }
    DecayBound deriv2_decay() const { return deriv2_decay_; }

    double amplitude() const { return spec_.amplitude; }
    /// Points worth probing when taking sups over the bump.
    std::vector<double> critical_points() const;
    /// Rightmost coordinate where the bump is non-negligible.
    double extent() const;

private:
    PerturbationSpec spec_;
    double domain_start_ = 0.0;
    double lo_ = 0.0, hi_ = 0.0;  // support for compact kinds
    std::shared_ptr<num::CachedAntiderivative> cum_;  // rational, general q
    std::shared_ptr<num::CubicSpline> table_;
    double table_total_ = 0.0;
    DecayBound value_decay_, deriv_decay_, deriv2_decay_;
};

/// Affine part a + b*(s - ref) of a profile.
struct AffinePart {
    double value_at_ref = 0.0;
    double slope = 0.0;
    double ref = 0.0;

    double at(double s) const { return value_at_ref + slope * (s - ref); }
};

/// Evaluable initial-data function on [domain_start, infinity) with value,
/// two derivatives, and a declared asymptotic form (affine + decaying
/// perturbation) used for sups over the unbounded domain.
class Profile {
public:
    Profile() = default;

    /// affine + direct bump terms (chi1-style data).
    static Profile with_bumps(AffinePart affine, std::vector<Bump> bumps, double domain_start);
    /// affine + integrated bump terms: bumps act on the derivative
    /// (chi0-style data, where perturbations are declared on chi0').
    static Profile with_integrated_bumps(AffinePart affine, std::vector<Bump> bumps,
                                         double domain_start);
    /// cubic-spline table on [lo, hi] continued by a declared affine tail.
    static Profile tabulated(num::CubicSpline table, double tail_slope, double tail_decay_order,
                             double tail_decay_coeff, double domain_start);

    double value(double s) const;
    double deriv(double s) const;
    double deriv2(double s) const;
    /// int_{domain_start}^{s} value; available for direct-bump and tabulated
    /// profiles (the chi1 pathway).
    double cumulative(double s) const;

    /// Deviations from the affine part, computed without forming the affine
    /// (cancellation-free at large s; the wave field is built from these).
    double dev_value(double s) const;
    double dev_deriv(double s) const;
    double dev_cumulative(double s) const;

    const AffinePart& affine() const { return affine_; }
    double domain_start() const { return domain_start_; }
    bool has_table() const { return table_ != nullptr; }
    const std::vector<Bump>& bumps() const { return bumps_; }
    bool integrated_bumps() const { return integrated_; }

    /// Declared-tail bounds on the deviation from the affine asymptote.
    double tail_start() const;
    double tail_bound_value_dev(double s) const;
    double tail_bound_deriv_dev(double s) const;
    double tail_bound_deriv2(double s) const;
    double weighted_limit_value_dev(double power) const;
    double weighted_limit_deriv_dev(double power) const;
    double weighted_limit_deriv2(double power) const;

    std::vector<double> critical_points() const;
    double outermost_extent() const;

private:
    AffinePart affine_;
    std::vector<Bump> bumps_;
    bool integrated_ = false;
    double domain_start_ = 0.0;
    std::shared_ptr<num::CubicSpline> table_;
    double table_tail_slope_ = 0.0;
    DecayBound table_decay_;
};

/// Classical shock-front initial data: chi0, chi1 on [sigma0, infinity)
/// extended to [0, sigma0] by the rigid-segment formulas.
struct InitialData {
    NondimensionalParams params;
    double sigma0 = 1.0;
    Profile chi0;
    Profile chi1;
    double N0_plus = 0.0;  // chi0'(sigma0+)
    double sigma1 = 0.0;   // chi1(sigma0+) / (N1 - N0_plus)

    double chi0_at(double s) const;
    double chi1_at(double s) const;
    double N0_at(double s) const;
    /// int_{sigma0}^{max(x, sigma0)} chi1.
    double chi1_cumulative(double x) const;
};

struct ValidationIssue {
    int item = 0;
    double s = 0.0;
    double value = 0.0;
    std::string message;
};

struct ValidationReport {
    bool pass = false;
    double sigma1 = 0.0;
    double N0_plus = 0.0;
    std::vector<ValidationIssue> issues;
    std::vector<std::string> notes;
};

/// Constant-stretch base data chi0' = tau, chi1 = zeta*(s-sigma0) +
/// sigma1*(N1-tau), with optional perturbations on chi0' and chi1.
/// Throws std::invalid_argument naming the violated data item if the
/// perturbations break the shock-front requirements.
InitialData make_constant_stretch_data(const NondimensionalParams& params, double sigma0,
                                       double sigma1, const PerturbationSpec& pert0 = {},
                                       const PerturbationSpec& pert1 = {});

/// Assemble data from externally built profiles (e.g. tabulated ones).
InitialData make_data_from_profiles(const NondimensionalParams& params, double sigma0,
                                    Profile chi0, Profile chi1, bool validate_now = true);

/// Load a two-column (s, value) strictly-increasing text table.
num::CubicSpline load_profile_table(const std::string& path);

/// Check every shock-front data item on an adaptive grid plus the declared
/// tails. Structured report; never throws on bad data.
ValidationReport validate(const InitialData& data, double margin = 1e-9);

enum class WeightPower { r_plus_1, r_plus_2 };

/// Weighted perturbation norm: sup over [sigma0, infinity) of
///   |chi0' - tau| + s^{r+p} |chi0''| + |chi1 - base| + s^{r+p} |chi1' - zf|
/// with p = 1, base = sigma1*(N1-tau), zf = 0   (r_plus_1, zeta = 0 form)
///      p = 2, base = zeta*(s-sigma0) + sigma1*(N1-tau), zf = zeta (r_plus_2).
double weighted_norm_B(const InitialData& data, double r, WeightPower weight);

/// Limit of (chi1(s) - zeta*(s-sigma0)) / (N1 - tau) read from the declared tail.
double sigma1_infinity(const InitialData& data);

}  // namespace slshock

#endif
