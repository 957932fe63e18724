#include "slshock/numerics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace slshock::num {

namespace {

double simpson_rule(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                            double fa, double fm, double fb, double whole, double tol,
                            int depth, int max_depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = simpson_rule(fa, flm, fm, m - a);
    double right = simpson_rule(fm, frm, fb, b - m);
    double err = left + right - whole;
    if (std::abs(err) <= 15.0 * tol) {
        return left + right + err / 15.0;
    }
    if (depth >= max_depth) {
        throw std::runtime_error("adaptive_simpson: no convergence on [" +
                                 std::to_string(a) + ", " + std::to_string(b) + "]");
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
    if (a == b) return 0.0;
    double fa = f(a);
    double fb = f(b);
    double fm = f(0.5 * (a + b));
    double whole = simpson_rule(fa, fm, fb, b - a);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 0, max_depth);
}

CachedAntiderivative::CachedAntiderivative(std::function<double(double)> f, double x0,
                                           double x_max, double points_per_decade,
                                           double tol_per_unit)
    : f_(std::move(f)), x0_(x0), tol_per_unit_(tol_per_unit) {
    if (x_max <= x0_) {
        knots_ = {x0_};
        partial_ = {0.0};
        return;
    }
    double lo = std::max(x0_, 1e-300);
    knots_ = geometric_grid(std::max(lo, 1e-12), x_max, points_per_decade);
    if (knots_.front() > x0_) knots_.insert(knots_.begin(), x0_);
    partial_.resize(knots_.size());
    partial_[0] = 0.0;
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        double len = knots_[i] - knots_[i - 1];
        partial_[i] = partial_[i - 1] +
                      adaptive_simpson(f_, knots_[i - 1], knots_[i],
                                       tol_per_unit_ * std::max(len, 1.0));
    }
}

double CachedAntiderivative::operator()(double x) const {
    if (knots_.empty()) return 0.0;
    if (x <= x0_) {
        if (x == x0_) return 0.0;
        return -adaptive_simpson(f_, x, x0_, tol_per_unit_ * std::max(x0_ - x, 1.0));
    }
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    std::size_t idx = static_cast<std::size_t>(it - knots_.begin());
    if (idx == 0) return adaptive_simpson(f_, x0_, x, tol_per_unit_);
    double base_x = knots_[idx - 1];
    double base = partial_[idx - 1];
    if (x == base_x) return base;
    double len = x - base_x;
    return base + adaptive_simpson(f_, base_x, x, tol_per_unit_ * std::max(len, 1.0));
}

double hermite(double t0, double y0, double dy0, double t1, double y1, double dy1, double t) {
    double h = t1 - t0;
    if (h == 0.0) return y0;
    double u = (t - t0) / h;
    double u2 = u * u;
    double u3 = u2 * u;
    double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    double h10 = u3 - 2.0 * u2 + u;
    double h01 = -2.0 * u3 + 3.0 * u2;
    double h11 = u3 - u2;
    return h00 * y0 + h10 * h * dy0 + h01 * y1 + h11 * h * dy1;
}

double hermite_deriv(double t0, double y0, double dy0, double t1, double y1, double dy1,
                     double t) {
    double h = t1 - t0;
    if (h == 0.0) return dy0;
    double u = (t - t0) / h;
    double u2 = u * u;
    double d00 = (6.0 * u2 - 6.0 * u) / h;
    double d10 = 3.0 * u2 - 4.0 * u + 1.0;
    double d01 = (-6.0 * u2 + 6.0 * u) / h;
    double d11 = 3.0 * u2 - 2.0 * u;
    return d00 * y0 + d10 * dy0 + d01 * y1 + d11 * dy1;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol_x,
              int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw std::invalid_argument("bisect: endpoints do not bracket a sign change");
    }
    for (int i = 0; i < max_iter && hi - lo > tol_x; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

LineFit ols(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("ols: need at least two matching points");
    }
    std::size_t n = x.size();
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    double mx = sx / static_cast<double>(n);
    double my = sy / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx;
        double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw std::invalid_argument("ols: degenerate abscissae");
    LineFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double e = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += e * e;
    }
    fit.r2 = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
    if (n > 2) {
        fit.slope_stderr = std::sqrt(ss_res / (static_cast<double>(n) - 2.0) / sxx);
    }
    return fit;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) {
        throw std::invalid_argument("CubicSpline: need >= 2 matching nodes");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(x_[i] > x_[i - 1])) {
            throw std::invalid_argument("CubicSpline: nodes must be strictly increasing");
        }
    }
    // natural spline: tridiagonal solve for second derivatives
    m_.assign(n, 0.0);
    if (n > 2) {
        std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            double hl = x_[i] - x_[i - 1];
            double hr = x_[i + 1] - x_[i];
            a[i] = hl;
            b[i] = 2.0 * (hl + hr);
            c[i] = hr;
            d[i] = 6.0 * ((y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl);
        }
        for (std::size_t i = 2; i + 1 < n; ++i) {
            double w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            d[i] -= w * d[i - 1];
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            m_[i] = (d[i] - c[i] * (i + 2 < n ? m_[i + 1] : 0.0)) / b[i];
            if (i == 1) break;
        }
    }
    cum_.assign(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        double h = x_[i] - x_[i - 1];
        // exact integral of the cubic piece
        cum_[i] = cum_[i - 1] + 0.5 * h * (y_[i - 1] + y_[i]) -
                  h * h * h / 24.0 * (m_[i - 1] + m_[i]);
    }
}

std::size_t CubicSpline::locate(double s) const {
    if (s <= x_.front()) return 0;
    if (s >= x_.back()) return x_.size() - 2;
    auto it = std::upper_bound(x_.begin(), x_.end(), s);
    return static_cast<std::size_t>(it - x_.begin()) - 1;
}

double CubicSpline::value(double s) const {
    std::size_t i = locate(s);
    double h = x_[i + 1] - x_[i];
    double A = (x_[i + 1] - s) / h;
    double B = (s - x_[i]) / h;
    return A * y_[i] + B * y_[i + 1] +
           ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::deriv(double s) const {
    std::size_t i = locate(s);
    double h = x_[i + 1] - x_[i];
    double A = (x_[i + 1] - s) / h;
    double B = (s - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           ((1.0 - 3.0 * A * A) * m_[i] + (3.0 * B * B - 1.0) * m_[i + 1]) * h / 6.0;
}

double CubicSpline::deriv2(double s) const {
    std::size_t i = locate(s);
    double h = x_[i + 1] - x_[i];
    double A = (x_[i + 1] - s) / h;
    double B = (s - x_[i]) / h;
    return A * m_[i] + B * m_[i + 1];
}

double CubicSpline::integral(double s) const {
    if (s <= x_.front()) return 0.0;
    if (s >= x_.back()) return cum_.back();
    std::size_t i = locate(s);
    double h = x_[i + 1] - x_[i];
    double A = (x_[i + 1] - s) / h;
    double B = (s - x_[i]) / h;
    // int over [x_i, s] of the cubic piece
    double part = h * (0.5 * (1.0 - A * A) * y_[i] + 0.5 * B * B * y_[i + 1]) +
                  h * h * h / 24.0 *
                      ((-(A * A * A * A) + 2.0 * A * A - 1.0) * m_[i] +
                       (B * B * B * B - 2.0 * B * B) * m_[i + 1]);
    return cum_[i] + part;
}

double CubicSpline::deriv_back() const {
    std::size_t n = x_.size();
    double h = x_[n - 1] - x_[n - 2];
    return (y_[n - 1] - y_[n - 2]) / h + (m_[n - 2] + 2.0 * m_[n - 1]) * h / 6.0;
}

std::vector<double> geometric_grid(double a, double b, double points_per_decade) {
    if (!(a > 0.0) || !(b > a)) {
        throw std::invalid_argument("geometric_grid: need 0 < a < b");
    }
    double decades = std::log10(b / a);
    std::size_t n = static_cast<std::size_t>(std::ceil(points_per_decade * decades)) + 1;
    n = std::max<std::size_t>(n, 2);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        double f = static_cast<double>(i) / static_cast<double>(n - 1);
        g[i] = a * std::pow(b / a, f);
    }
    g.front() = a;
    g.back() = b;
    return g;
}

std::string fnv1a64_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

std::string format_shortest(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_sig17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

}  // namespace slshock::num
