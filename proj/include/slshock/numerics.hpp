#ifndef SLSHOCK_NUMERICS_HPP
#define SLSHOCK_NUMERICS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace slshock::num {

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
/// Throws std::runtime_error naming the offending interval when the
/// recursion exceeds `max_depth` without convergence.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int max_depth = 40);

/// Cached antiderivative F(x) = int_{x0}^{x} f on geometric knots.
/// Exact per-knot integrals are precomputed with adaptive Simpson; an
/// evaluation between knots re-integrates just the short gap, so the
/// evaluator is deterministic and immutable after construction.
class CachedAntiderivative {
public:
    CachedAntiderivative() = default;
    CachedAntiderivative(std::function<double(double)> f, double x0, double x_max,
                         double points_per_decade = 64.0, double tol_per_unit = 1e-12);

    double operator()(double x) const;
    double x0() const { return x0_; }

private:
    std::function<double(double)> f_;
    double x0_ = 0.0;
    double tol_per_unit_ = 1e-12;
    std::vector<double> knots_;
    std::vector<double> partial_;  // partial_[i] = int_{x0}^{knots_[i]} f
};

/// Cubic Hermite interpolation of y(t) on [t0, t1] from endpoint values
/// and derivatives; `hermite_deriv` is its exact time derivative.
double hermite(double t0, double y0, double dy0, double t1, double y1, double dy1, double t);
double hermite_deriv(double t0, double y0, double dy0, double t1, double y1, double dy1, double t);

/// Bisection root locator on [lo, hi]; f(lo) and f(hi) must bracket a sign
/// change. Returns the midpoint of the final bracket of width <= tol_x.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol_x, int max_iter = 200);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double slope_stderr = 0.0;
    std::size_t n = 0;
};

/// Ordinary least squares y = a + b x.
LineFit ols(const std::vector<double>& x, const std::vector<double>& y);

/// Natural cubic spline through strictly increasing nodes.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double value(double s) const;
    double deriv(double s) const;
    double deriv2(double s) const;
    /// int_{x_front}^{s} of the spline, clamped to the node range.
    double integral(double s) const;

    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }
    double y_front() const { return y_.front(); }
    double y_back() const { return y_.back(); }
    double deriv_back() const;
    const std::vector<double>& nodes() const { return x_; }

private:
    std::size_t locate(double s) const;
    std::vector<double> x_, y_, m_;        // m_ = second derivatives at nodes
    std::vector<double> cum_;              // integral up to each node
};

/// Geometric grid with `points_per_decade` resolution on [a, b], a > 0.
std::vector<double> geometric_grid(double a, double b, double points_per_decade);

/// FNV-1a 64-bit hash, hex-encoded; used for config provenance stamps.
std::string fnv1a64_hex(const std::string& data);

/// Shortest round-trip decimal representation of a double.
std::string format_shortest(double v);
/// Fixed 17-significant-digit decimal (trajectory CSV schema).
std::string format_sig17(double v);

}  // namespace slshock::num

#endif
