#include "slshock/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace slshock {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double quintic_smoothstep(double x) { return x * x * x * (10.0 + x * (-15.0 + 6.0 * x)); }
double quintic_smoothstep_d(double x) {
    double u = x * (1.0 - x);
    return 30.0 * u * u;
}
double quintic_smoothstep_d2(double x) { return 60.0 * x * (2.0 * x - 1.0) * (x - 1.0); }
// int_0^X of the smoothstep
double quintic_smoothstep_i(double x) {
    double x2 = x * x;
    return x2 * x2 * (2.5 + x * (-3.0 + x));
}

double compact_poly(double u) {
    double q = 1.0 - u * u;
    return q * q * q;
}
// int_{-1}^{u} (1-v^2)^3 dv relative to G(u) = u - u^3 + 3u^5/5 - u^7/7
double compact_poly_g(double u) {
    double u2 = u * u;
    return u * (1.0 + u2 * (-1.0 + u2 * (0.6 - u2 / 7.0)));
}

}  // namespace

double DecayBound::at(double s) const {
    if (compact) return s >= start ? 0.0 : kInf;
    if (coeff == 0.0) return 0.0;
    if (s < start) return kInf;
    return coeff * std::pow(s, -order);
}

double DecayBound::weighted_limit(double power) const {
    if (compact || coeff == 0.0) return 0.0;
    if (power < order) return 0.0;
    if (power == order) return limit_coeff;
    return kInf;
}

Bump Bump::make(const PerturbationSpec& spec, double domain_start) {
    Bump b;
    b.spec_ = spec;
    b.domain_start_ = domain_start;
    if (spec.kind == PerturbationKind::none || spec.amplitude == 0.0) {
        b.spec_.kind = PerturbationKind::none;
        b.spec_.amplitude = 0.0;
        b.value_decay_ = {0.0, 0.0, domain_start, true, 0.0};
        b.deriv_decay_ = b.value_decay_;
        b.deriv2_decay_ = b.value_decay_;
        return b;
    }
    double a = std::abs(spec.amplitude);
    double w = spec.width;
    double c = spec.center;
    if (!(w > 0.0)) throw std::invalid_argument("perturbation width must be > 0");
    switch (spec.kind) {
        case PerturbationKind::rational_bump: {
            double q = spec.decay_order;
            if (!(q > 0.0)) throw std::invalid_argument("rational_bump decay order must be > 0");
            if (!(c >= 0.0)) throw std::invalid_argument("rational_bump center must be >= 0");
            b.lo_ = -kInf;
            b.hi_ = kInf;
            double ts = std::max({2.0 * c, c + 2.0 * w, domain_start, 1e-6});
            b.value_decay_ = {q, a * std::pow(2.0 * w, q), ts, false, a * std::pow(w, q)};
            b.deriv_decay_ = {q + 1.0, a * q * std::pow(w, q) * std::pow(2.0, q + 1.0), ts,
                              false, a * q * std::pow(w, q)};
            b.deriv2_decay_ = {q + 2.0,
                               a * q * (q + 3.0) * std::pow(w, q) * std::pow(2.0, q + 2.0), ts,
                               false, a * q * (q + 1.0) * std::pow(w, q)};
            if (q != 2.0) {
                double amp = spec.amplitude, wd = w, cc = c;
                auto f = [amp, wd, cc, q](double s) {
                    double u = (s - cc) / wd;
                    return amp * std::pow(1.0 + u * u, -0.5 * q);
                };
                double x_max = std::max(1e7 * std::max(domain_start, 1.0), c + 1e6 * w);
                b.cum_ = std::make_shared<num::CachedAntiderivative>(f, domain_start, x_max);
            }
            break;
        }
        case PerturbationKind::compact_bump:
        case PerturbationKind::plateau_bump: {
            b.lo_ = c - w;
            b.hi_ = c + w;
            if (spec.kind == PerturbationKind::plateau_bump) {
                if (!(spec.inner_width >= 0.0 && spec.inner_width < w)) {
                    throw std::invalid_argument("plateau_bump needs 0 <= inner_width < width");
                }
            }
            b.value_decay_ = {0.0, 0.0, b.hi_, true, 0.0};
            b.deriv_decay_ = b.value_decay_;
            b.deriv2_decay_ = b.value_decay_;
            break;
        }
        case PerturbationKind::tabulated: {
            auto spl = std::make_shared<num::CubicSpline>(load_profile_table(spec.table_path));
            if (std::abs(spl->y_front()) > 1e-12 || std::abs(spl->y_back()) > 1e-12) {
                throw std::invalid_argument(
                    "tabulated perturbation must start and end at zero: " + spec.table_path);
            }
            b.table_ = spl;
            b.lo_ = spl->x_front();
            b.hi_ = spl->x_back();
            b.table_total_ = spl->integral(b.hi_);
            b.value_decay_ = {0.0, 0.0, b.hi_, true, 0.0};
            b.deriv_decay_ = b.value_decay_;
            b.deriv2_decay_ = b.value_decay_;
            break;
        }
        default:
            break;
    }
    return b;
}

double Bump::value(double s) const {
    const auto& p = spec_;
    switch (p.kind) {
        case PerturbationKind::none:
            return 0.0;
        case PerturbationKind::rational_bump: {
            double u = (s - p.center) / p.width;
            return p.amplitude * std::pow(1.0 + u * u, -0.5 * p.decay_order);
        }
        case PerturbationKind::compact_bump: {
            double u = (s - p.center) / p.width;
            if (std::abs(u) >= 1.0) return 0.0;
            return p.amplitude * compact_poly(u);
        }
        case PerturbationKind::plateau_bump: {
            if (s <= lo_ || s >= hi_) return 0.0;
            double wi = p.inner_width;
            double rw = p.width - wi;
            if (s < p.center - wi) return p.amplitude * quintic_smoothstep((s - lo_) / rw);
            if (s > p.center + wi) return p.amplitude * quintic_smoothstep((hi_ - s) / rw);
            return p.amplitude;
        }
        case PerturbationKind::tabulated:
            if (s <= lo_ || s >= hi_) return 0.0;
            return table_->value(s);
    }
    return 0.0;
}

double Bump::deriv(double s) const {
    const auto& p = spec_;
    switch (p.kind) {
        case PerturbationKind::none:
            return 0.0;
        case PerturbationKind::rational_bump: {
            double u = (s - p.center) / p.width;
            return -p.amplitude * p.decay_order * u / p.width *
                   std::pow(1.0 + u * u, -0.5 * p.decay_order - 1.0);
        }
        case PerturbationKind::compact_bump: {
            double u = (s - p.center) / p.width;
            if (std::abs(u) >= 1.0) return 0.0;
            double q = 1.0 - u * u;
            return -6.0 * p.amplitude * u * q * q / p.width;
        }
        case PerturbationKind::plateau_bump: {
            if (s <= lo_ || s >= hi_) return 0.0;
            double wi = p.inner_width;
            double rw = p.width - wi;
            if (s < p.center - wi) return p.amplitude * quintic_smoothstep_d((s - lo_) / rw) / rw;
            if (s > p.center + wi) return -p.amplitude * quintic_smoothstep_d((hi_ - s) / rw) / rw;
            return 0.0;
        }
        case PerturbationKind::tabulated:
            if (s <= lo_ || s >= hi_) return 0.0;
            return table_->deriv(s);
    }
    return 0.0;
}

double Bump::deriv2(double s) const {
    const auto& p = spec_;
    switch (p.kind) {
        case PerturbationKind::none:
            return 0.0;
        case PerturbationKind::rational_bump: {
            double u = (s - p.center) / p.width;
            double w2 = p.width * p.width;
            double base = std::pow(1.0 + u * u, -0.5 * p.decay_order - 2.0);
            return -p.amplitude * p.decay_order / w2 * base *
                   (1.0 + u * u - (p.decay_order + 2.0) * u * u);
        }
        case PerturbationKind::compact_bump: {
            double u = (s - p.center) / p.width;
            if (std::abs(u) >= 1.0) return 0.0;
            double q = 1.0 - u * u;
            return -6.0 * p.amplitude * q * (1.0 - 5.0 * u * u) / (p.width * p.width);
        }
        case PerturbationKind::plateau_bump: {
            if (s <= lo_ || s >= hi_) return 0.0;
            double wi = p.inner_width;
            double rw = p.width - wi;
            if (s < p.center - wi) {
                return p.amplitude * quintic_smoothstep_d2((s - lo_) / rw) / (rw * rw);
            }
            if (s > p.center + wi) {
                return p.amplitude * quintic_smoothstep_d2((hi_ - s) / rw) / (rw * rw);
            }
            return 0.0;
        }
        case PerturbationKind::tabulated:
            if (s <= lo_ || s >= hi_) return 0.0;
            return table_->deriv2(s);
    }
    return 0.0;
}

double Bump::cumulative(double s) const {
    const auto& p = spec_;
    switch (p.kind) {
        case PerturbationKind::none:
            return 0.0;
        case PerturbationKind::rational_bump: {
            if (p.decay_order == 2.0) {
                double u = (s - p.center) / p.width;
                double u0 = (domain_start_ - p.center) / p.width;
                return p.amplitude * p.width * (std::atan(u) - std::atan(u0));
            }
            return (*cum_)(s);
        }
        case PerturbationKind::compact_bump: {
            auto clamp_u = [this, &p](double x) {
                return std::clamp((x - p.center) / p.width, -1.0, 1.0);
            };
            return p.amplitude * p.width *
                   (compact_poly_g(clamp_u(s)) - compact_poly_g(clamp_u(domain_start_)));
        }
        case PerturbationKind::plateau_bump: {
            auto from_lo = [this, &p](double x) {
                if (x <= lo_) return 0.0;
                double wi = p.inner_width;
                double rw = p.width - wi;
                if (x >= hi_) return p.amplitude * (p.width + wi);
                if (x < p.center - wi) {
                    return p.amplitude * rw * quintic_smoothstep_i((x - lo_) / rw);
                }
                double up = p.amplitude * rw * quintic_smoothstep_i(1.0);
                if (x <= p.center + wi) return up + p.amplitude * (x - (p.center - wi));
                double flat = up + 2.0 * p.amplitude * wi;
                return flat + p.amplitude * rw *
                                  (quintic_smoothstep_i(1.0) - quintic_smoothstep_i((hi_ - x) / rw));
            };
            return from_lo(s) - from_lo(domain_start_);
        }
        case PerturbationKind::tabulated: {
            auto from_lo = [this](double x) {
                if (x <= lo_) return 0.0;
                if (x >= hi_) return table_total_;
                return table_->integral(x);
            };
            return from_lo(s) - from_lo(domain_start_);
        }
    }
    return 0.0;
}

std::vector<double> Bump::critical_points() const {
    const auto& p = spec_;
    std::vector<double> pts;
    switch (p.kind) {
        case PerturbationKind::none:
            break;
        case PerturbationKind::rational_bump:
            for (double k : {-4.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 4.0}) {
                pts.push_back(p.center + k * p.width);
            }
            break;
        case PerturbationKind::compact_bump:
        case PerturbationKind::plateau_bump:
        case PerturbationKind::tabulated:
            for (double k : {-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0}) {
                pts.push_back(p.center + k * p.width);
            }
            if (p.kind == PerturbationKind::plateau_bump) {
                pts.push_back(p.center - p.inner_width);
                pts.push_back(p.center + p.inner_width);
                pts.push_back(0.5 * (p.center - p.width + p.center - p.inner_width));
                pts.push_back(0.5 * (p.center + p.width + p.center + p.inner_width));
            }
            break;
    }
    return pts;
}

double Bump::extent() const {
    const auto& p = spec_;
    if (p.kind == PerturbationKind::none) return 0.0;
    if (p.kind == PerturbationKind::rational_bump) return p.center + 8.0 * p.width;
    return hi_;
}

Profile Profile::with_bumps(AffinePart affine, std::vector<Bump> bumps, double domain_start) {
    Profile pr;
    pr.affine_ = affine;
    pr.bumps_ = std::move(bumps);
    pr.integrated_ = false;
    pr.domain_start_ = domain_start;
    return pr;
}

Profile Profile::with_integrated_bumps(AffinePart affine, std::vector<Bump> bumps,
                                       double domain_start) {
    Profile pr = with_bumps(affine, std::move(bumps), domain_start);
    pr.integrated_ = true;
    return pr;
}

Profile Profile::tabulated(num::CubicSpline table, double tail_slope, double tail_decay_order,
                           double tail_decay_coeff, double domain_start) {
    Profile pr;
    pr.domain_start_ = domain_start;
    pr.table_ = std::make_shared<num::CubicSpline>(std::move(table));
    if (pr.table_->x_front() > domain_start) {
        throw std::invalid_argument("tabulated profile must cover the domain start");
    }
    pr.table_tail_slope_ = tail_slope;
    double hi = pr.table_->x_back();
    pr.affine_ = {pr.table_->y_back() - tail_slope * (hi - domain_start), tail_slope,
                  domain_start};
    // beyond the table the profile equals its affine tail exactly; the
    // declared decay documents the approach rate inside the table range
    pr.table_decay_ = {tail_decay_order, tail_decay_coeff, hi, true, 0.0};
    return pr;
}

double Profile::value(double s) const {
    if (table_) {
        double hi = table_->x_back();
        if (s <= hi) return table_->value(s);
        return table_->y_back() + table_tail_slope_ * (s - hi);
    }
    double v = affine_.at(s);
    for (const auto& b : bumps_) v += integrated_ ? b.cumulative(s) : b.value(s);
    return v;
}

double Profile::deriv(double s) const {
    if (table_) {
        return s <= table_->x_back() ? table_->deriv(s) : table_tail_slope_;
    }
    double v = affine_.slope;
    for (const auto& b : bumps_) v += integrated_ ? b.value(s) : b.deriv(s);
    return v;
}

double Profile::deriv2(double s) const {
    if (table_) {
        return s <= table_->x_back() ? table_->deriv2(s) : 0.0;
    }
    double v = 0.0;
    for (const auto& b : bumps_) v += integrated_ ? b.deriv(s) : b.deriv2(s);
    return v;
}

double Profile::cumulative(double s) const {
    double s0 = domain_start_;
    if (s <= s0) return 0.0;
    if (table_) {
        double hi = table_->x_back();
        double base = table_->integral(std::min(s, hi)) - table_->integral(s0);
        if (s <= hi) return base;
        double d = s - hi;
        return base + table_->y_back() * d + 0.5 * table_tail_slope_ * d * d;
    }
    if (integrated_) {
        throw std::logic_error("Profile::cumulative: not available for integrated-bump profiles");
    }
    double d = s - s0;
    double v = affine_.value_at_ref * d + 0.5 * affine_.slope * d * d;
    for (const auto& b : bumps_) v += b.cumulative(s);
    return v;
}

double Profile::dev_value(double s) const {
    if (table_) return value(s) - affine_.at(s);
    double v = 0.0;
    for (const auto& b : bumps_) v += integrated_ ? b.cumulative(s) : b.value(s);
    return v;
}

double Profile::dev_deriv(double s) const {
    if (table_) return deriv(s) - affine_.slope;
    double v = 0.0;
    for (const auto& b : bumps_) v += integrated_ ? b.value(s) : b.deriv(s);
    return v;
}

double Profile::dev_cumulative(double s) const {
    if (s <= domain_start_) return 0.0;
    if (table_) {
        double d = s - domain_start_;
        return cumulative(s) -
               (affine_.value_at_ref * d + 0.5 * affine_.slope * d * d);
    }
    if (integrated_) {
        throw std::logic_error("Profile::dev_cumulative: chi1-style profiles only");
    }
    double v = 0.0;
    for (const auto& b : bumps_) v += b.cumulative(s);
    return v;
}

double Profile::tail_start() const {
    double ts = table_ ? table_decay_.start : domain_start_;
    for (const auto& b : bumps_) {
        ts = std::max({ts, b.value_decay().start, b.deriv_decay().start});
    }
    return ts;
}

double Profile::tail_bound_value_dev(double s) const {
    if (table_) return s >= table_decay_.start ? 0.0 : kInf;
    double v = 0.0;
    for (const auto& b : bumps_) {
        if (integrated_) {
            // |int_s^inf p| <= coeff * s^{1-q}/(q-1) for q > 1
            auto d = b.value_decay();
            if (d.compact) {
                if (s < d.start) return kInf;
                continue;
            }
            if (d.order <= 1.0) return kInf;
            if (s < d.start) return kInf;
            v += d.coeff * std::pow(s, 1.0 - d.order) / (d.order - 1.0);
        } else {
            v += b.value_decay().at(s);
        }
    }
    return v;
}

double Profile::tail_bound_deriv_dev(double s) const {
    if (table_) return s >= table_decay_.start ? 0.0 : kInf;
    double v = 0.0;
    for (const auto& b : bumps_) v += integrated_ ? b.value_decay().at(s) : b.deriv_decay().at(s);
    return v;
}

double Profile::tail_bound_deriv2(double s) const {
    if (table_) return s >= table_decay_.start ? 0.0 : kInf;
    double v = 0.0;
    for (const auto& b : bumps_) v += integrated_ ? b.deriv_decay().at(s) : b.deriv2_decay().at(s);
    return v;
}

double Profile::weighted_limit_value_dev(double power) const {
    if (table_) return 0.0;
    double v = 0.0;
    for (const auto& b : bumps_) {
        if (integrated_) {
            auto d = b.value_decay();
            if (d.compact) continue;
            if (power + 1.0 < d.order) continue;
            if (power + 1.0 == d.order) {
                v += d.limit_coeff / std::max(d.order - 1.0, 1e-300);
            } else {
                return kInf;
            }
        } else {
            v += b.value_decay().weighted_limit(power);
        }
    }
    return v;
}

double Profile::weighted_limit_deriv_dev(double power) const {
    if (table_) return 0.0;
    double v = 0.0;
    for (const auto& b : bumps_) {
        v += integrated_ ? b.value_decay().weighted_limit(power)
                         : b.deriv_decay().weighted_limit(power);
    }
    return v;
}

double Profile::weighted_limit_deriv2(double power) const {
    if (table_) return 0.0;
    double v = 0.0;
    for (const auto& b : bumps_) {
        v += integrated_ ? b.deriv_decay().weighted_limit(power)
                         : b.deriv2_decay().weighted_limit(power);
    }
    return v;
}

std::vector<double> Profile::critical_points() const {
    std::vector<double> pts;
    for (const auto& b : bumps_) {
        auto c = b.critical_points();
        pts.insert(pts.end(), c.begin(), c.end());
    }
    if (table_) {
        const auto& nodes = table_->nodes();
        pts.insert(pts.end(), nodes.begin(), nodes.end());
    }
    return pts;
}

double Profile::outermost_extent() const {
    double e = domain_start_;
    for (const auto& b : bumps_) e = std::max(e, b.extent());
    if (table_) e = std::max(e, table_->x_back());
    return e;
}

double InitialData::chi0_at(double s) const {
    return s >= sigma0 ? chi0.value(s) : params.N1 * s;
}

double InitialData::chi1_at(double s) const { return s >= sigma0 ? chi1.value(s) : 0.0; }

double InitialData::N0_at(double s) const {
    if (s >= sigma0) return chi0.deriv(s);
    return N0_plus + sigma1 * sigma1 * (params.N1 - N0_plus);
}

double InitialData::chi1_cumulative(double x) const {
    return x <= sigma0 ? 0.0 : chi1.cumulative(x);
}

num::CubicSpline load_profile_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open profile table: " + path);
    std::vector<double> xs, ys;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double x, y;
        if (!(ls >> x)) continue;  // blank/comment line
        if (!(ls >> y)) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected two numeric columns");
        }
        xs.push_back(x);
        ys.push_back(y);
    }
    if (xs.size() < 4) {
        throw std::invalid_argument(path + ": need at least 4 samples");
    }
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1])) {
            throw std::invalid_argument(path + ": sample coordinates must be strictly increasing");
        }
    }
    return num::CubicSpline(std::move(xs), std::move(ys));
}

InitialData make_data_from_profiles(const NondimensionalParams& params, double sigma0,
                                    Profile chi0, Profile chi1, bool validate_now) {
    params.validate();
    if (!(sigma0 > 0.0)) throw std::invalid_argument("sigma0 must be > 0");
    InitialData data;
    data.params = params;
    data.sigma0 = sigma0;
    data.chi0 = std::move(chi0);
    data.chi1 = std::move(chi1);
    data.N0_plus = data.chi0.deriv(sigma0);
    double gap = params.N1 - data.N0_plus;
    data.sigma1 = gap > 0.0 ? data.chi1.value(sigma0) / gap : kInf;
    if (validate_now) {
        auto report = validate(data);
        if (!report.pass) {
            std::string msg = "initial data rejected:";
            for (const auto& issue : report.issues) msg += " [" + issue.message + "]";
            throw std::invalid_argument(msg);
        }
    }
    return data;
}

InitialData make_constant_stretch_data(const NondimensionalParams& params, double sigma0,
                                       double sigma1, const PerturbationSpec& pert0,
                                       const PerturbationSpec& pert1) {
    params.validate();
    if (!(sigma0 > 0.0)) throw std::invalid_argument("sigma0 must be > 0");
    if (!(sigma1 > 1.0)) throw std::invalid_argument("sigma1 must be > 1");
    std::vector<Bump> b0, b1;
    if (pert0.kind != PerturbationKind::none) b0.push_back(Bump::make(pert0, sigma0));
    if (pert1.kind != PerturbationKind::none) b1.push_back(Bump::make(pert1, sigma0));
    Profile chi0 = Profile::with_integrated_bumps(
        {params.N1 * sigma0, params.tau, sigma0}, std::move(b0), sigma0);
    Profile chi1 = Profile::with_bumps(
        {sigma1 * (params.N1 - params.tau), params.zeta, sigma0}, std::move(b1), sigma0);
    return make_data_from_profiles(params, sigma0, std::move(chi0), std::move(chi1), true);
}

namespace {

std::vector<double> validation_grid(const InitialData& data) {
    double s0 = data.sigma0;
    double S = std::max({100.0 * s0, 4.0 * data.chi0.outermost_extent(),
                         4.0 * data.chi1.outermost_extent(), 2.0 * data.chi0.tail_start(),
                         2.0 * data.chi1.tail_start()});
    std::set<double> pts;
    for (double g : num::geometric_grid(s0, S, 64.0)) pts.insert(g);
    for (const Profile* p : {&data.chi0, &data.chi1}) {
        for (double c : p->critical_points()) {
            if (c >= s0) pts.insert(c);
        }
        for (const auto& b : p->bumps()) {
            double lo = std::max(s0, b.critical_points().empty() ? s0 : b.critical_points().front());
            double hi = b.extent();
            if (hi > lo) {
                for (int i = 0; i <= 128; ++i) {
                    pts.insert(lo + (hi - lo) * i / 128.0);
                }
            }
        }
    }
    return {pts.begin(), pts.end()};
}

}  // namespace

ValidationReport validate(const InitialData& data, double margin) {
    ValidationReport rep;
    rep.N0_plus = data.N0_plus;
    rep.sigma1 = data.sigma1;
    const auto& p = data.params;
    auto grid = validation_grid(data);

    // item 1: declared derivatives are consistent with the values
    {
        double h = 1e-4;
        double worst = 0.0, worst_s = data.sigma0;
        std::size_t stride = std::max<std::size_t>(1, grid.size() / 60);
        for (std::size_t i = 0; i < grid.size(); i += stride) {
            double s = std::max(grid[i], data.sigma0 + h);
            double fd0 = (data.chi0.value(s + h) - data.chi0.value(s - h)) / (2.0 * h);
            double fd1 = (data.chi1.value(s + h) - data.chi1.value(s - h)) / (2.0 * h);
            double fd0d = (data.chi0.deriv(s + h) - data.chi0.deriv(s - h)) / (2.0 * h);
            double e = std::abs(fd0 - data.chi0.deriv(s)) / std::max(1.0, std::abs(fd0));
            e = std::max(e, std::abs(fd1 - data.chi1.deriv(s)) / std::max(1.0, std::abs(fd1)));
            e = std::max(e,
                         std::abs(fd0d - data.chi0.deriv2(s)) / std::max(1.0, std::abs(fd0d)));
            if (e > worst) {
                worst = e;
                worst_s = s;
            }
        }
        if (worst > 1e-6) {
            rep.issues.push_back({1, worst_s, worst,
                                  "item 1: derivative inconsistent with value near s = " +
                                      num::format_shortest(worst_s)});
        }
    }

    // item 2: eta < chi0'(s) < N1 on the grid and in the declared tail
    {
        for (double s : grid) {
            double v = data.chi0.deriv(s);
            if (!(v > p.eta + margin)) {
                rep.issues.push_back({2, s, v,
                                      "item 2: tension trace reaches the lower bound eta at s = " +
                                          num::format_shortest(s)});
                break;
            }
            if (!(v < p.N1 - margin)) {
                rep.issues.push_back({2, s, v,
                                      "item 2: tension trace reaches the threshold N1 at s = " +
                                          num::format_shortest(s)});
                break;
            }
        }
        double sf = std::max(grid.back(), data.chi0.tail_start());
        double bound = data.chi0.tail_bound_deriv_dev(sf);
        if (!(p.tau + bound < p.N1 - margin) || !(p.tau - bound > p.eta + margin)) {
            rep.issues.push_back({2, sf, bound,
                                  "item 2: declared tail bound does not keep chi0' inside "
                                  "(eta, N1) beyond s = " +
                                      num::format_shortest(sf)});
        }
    }

    // item 3: chi0(sigma0) = N1*sigma0 and the declared limits at infinity
    {
        double v = data.chi0.value(data.sigma0);
        double target = p.N1 * data.sigma0;
        if (std::abs(v - target) > 1e-12) {
            rep.issues.push_back({3, data.sigma0, v, "item 3: chi0(sigma0) != N1*sigma0"});
        }
        if (std::abs(data.chi0.affine().slope - p.tau) > 1e-9) {
            rep.issues.push_back({3, data.sigma0, data.chi0.affine().slope,
                                  "item 3: chi0' does not approach tau at infinity"});
        }
        if (std::abs(data.chi1.affine().slope - p.zeta) > 1e-9) {
            rep.issues.push_back({3, data.sigma0, data.chi1.affine().slope,
                                  "item 3: chi1' does not approach zeta at infinity"});
        }
    }

    // item 4: initial shock speed above the wave speed
    if (!(data.sigma1 > 1.0 + margin)) {
        rep.issues.push_back({4, data.sigma0, data.sigma1,
                              "item 4: sigma1 = chi1(sigma0)/(N1 - chi0'(sigma0)) must exceed 1"});
    }

    // item 5: rigid-segment extension (closed formulas; tension above N1)
    {
        double Nm = data.N0_at(0.0);
        if (!(Nm > p.N1)) {
            rep.issues.push_back(
                {5, 0.0, Nm, "item 5: extended tension on [0, sigma0] does not exceed N1"});
        }
    }

    if (data.chi0.has_table()) {
        rep.notes.push_back(
            "tabulated chi0: uniqueness of the front coordinate checked on the sample grid only");
    }
    rep.pass = rep.issues.empty();
    return rep;
}

double weighted_norm_B(const InitialData& data, double r, WeightPower weight) {
    const auto& p = data.params;
    double pw = weight == WeightPower::r_plus_1 ? r + 1.0 : r + 2.0;
    double zf = weight == WeightPower::r_plus_1 ? 0.0 : p.zeta;
    double base_c = data.sigma1 * (p.N1 - p.tau);

    auto term_sum = [&](double s) {
        double t1 = std::abs(data.chi0.deriv(s) - p.tau);
        double t2 = std::pow(s, pw) * std::abs(data.chi0.deriv2(s));
        double base = base_c + (weight == WeightPower::r_plus_2 ? p.zeta * (s - data.sigma0) : 0.0);
        double t3 = std::abs(data.chi1.value(s) - base);
        double t4 = std::pow(s, pw) * std::abs(data.chi1.deriv(s) - zf);
        return t1 + t2 + t3 + t4;
    };

    double s0 = data.sigma0;
    double S = std::max({100.0 * s0, 20.0 * data.chi0.outermost_extent(),
                         20.0 * data.chi1.outermost_extent(), 2.0 * data.chi0.tail_start(),
                         2.0 * data.chi1.tail_start()});

    // zeta = 0 form weighs chi1' itself; a nonzero slope makes B infinite
    if (weight == WeightPower::r_plus_1 && p.zeta != 0.0) return kInf;
    double limit = data.chi0.weighted_limit_deriv2(pw) + data.chi1.weighted_limit_deriv_dev(pw);
    if (std::isinf(limit)) return kInf;

    double sup = limit;
    double prev = -1.0;
    for (int round = 0; round < 12; ++round) {
        std::set<double> pts;
        for (double g : num::geometric_grid(s0, S, 64.0)) pts.insert(g);
        for (const Profile* pr : {&data.chi0, &data.chi1}) {
            for (double c : pr->critical_points()) {
                if (c >= s0) pts.insert(c);
            }
            for (const auto& b : pr->bumps()) {
                auto cps = b.critical_points();
                if (cps.empty()) continue;
                double lo = std::max(s0, cps.front());
                double hi = std::max(lo, cps.back());
                for (int i = 0; i <= 256; ++i) pts.insert(lo + (hi - lo) * i / 256.0);
            }
        }
        double gs = limit;
        for (double s : pts) gs = std::max(gs, term_sum(s));
        sup = gs;
        if (prev >= 0.0 && std::abs(sup - prev) <= 0.005 * std::max(sup, 1e-300)) break;
        prev = sup;
        S *= 2.0;
    }
    return sup;
}

double sigma1_infinity(const InitialData& data) {
    const auto& p = data.params;
    return data.chi1.affine().value_at_ref / (p.N1 - p.tau);
}

}  // namespace slshock
