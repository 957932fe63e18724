#include "slshock/front_tracker.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace slshock {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Dormand-Prince 5(4) coefficients
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct GoldenResult {
    double x;
    double value;
};

// deterministic local polish of a 1-d max between brackets
template <typename F>
GoldenResult golden_max(const F& f, double lo, double hi, int iters = 24) {
    const double phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        }
    }
    return f1 > f2 ? GoldenResult{x1, f1} : GoldenResult{x2, f2};
}

}  // namespace

std::string to_string(Termination t) {
    switch (t) {
        case Termination::reached_horizon: return "reached_horizon";
        case Termination::lax_failure: return "lax_failure";
        case Termination::second_shock: return "second_shock";
        case Termination::tension_floor: return "tension_floor";
        case Termination::threshold_time_reached: return "threshold_time_reached";
        case Termination::blow_up_certified: return "blow_up_certified";
    }
    return "unknown";
}

double step_rhs(const WaveField& field, double t, double sigma) {
    FieldValue v = field.eval(sigma, t);
    const auto& p = field.data().params;
    // N1 - chi_s assembled from the exact affine gap minus the deviation, so
    // the denominator keeps full precision as the gap closes near T(zeta)
    double den = (p.N1 - p.tau - p.zeta * t) - v.chi_s_dev;
    if (!(den > 0.0)) {
        throw std::runtime_error("step_rhs: constitutive breakdown, N1 - chi_s <= 0 at sigma = " +
                                 std::to_string(sigma) + ", t = " + std::to_string(t));
    }
    return v.chi_t / den;
}

double default_monitor_span(const InitialData& data) {
    double extent = std::max(data.chi0.outermost_extent(), data.chi1.outermost_extent());
    return 4.0 * std::max(extent, data.sigma0);
}

MonitorExtrema monitor_chi_s_extrema(const WaveField& field, double t, double sigma, double span,
                                     double points_per_decade) {
    const InitialData& d = field.data();
    double s_far = sigma + span;
    double ts = std::max(d.chi0.tail_start(), d.chi1.tail_start());
    s_far = std::max(s_far, ts + t);

    std::set<double> pts;
    pts.insert(sigma);
    pts.insert(s_far);
    for (double g : num::geometric_grid(std::max(sigma, 1e-12), s_far, points_per_decade)) {
        pts.insert(g);
    }
    for (int i = 1; i < 32; ++i) {
        pts.insert(sigma + span * i / 32.0);
    }
    for (const Profile* p : {&d.chi0, &d.chi1}) {
        for (double cp : p->critical_points()) {
            for (double mapped : {cp - t, cp + t}) {
                if (mapped >= sigma && mapped <= s_far) pts.insert(mapped);
            }
        }
    }

    auto chi_s = [&](double s) { return field.eval(s, t).chi_s; };
    MonitorExtrema ext;
    ext.sup = -kInf;
    ext.inf = kInf;
    std::vector<double> grid(pts.begin(), pts.end());
    std::size_t imax = 0, imin = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double v = chi_s(grid[i]);
        if (v > ext.sup) {
            ext.sup = v;
            ext.arg_sup = grid[i];
            imax = i;
        }
        if (v < ext.inf) {
            ext.inf = v;
            ext.arg_inf = grid[i];
            imin = i;
        }
    }
    // local polish between grid neighbours
    auto polish = [&](std::size_t idx, bool maximize) {
        double lo = idx > 0 ? grid[idx - 1] : grid[idx];
        double hi = idx + 1 < grid.size() ? grid[idx + 1] : grid[idx];
        if (hi <= lo) return;
        auto f = [&](double s) { return maximize ? chi_s(s) : -chi_s(s); };
        auto r = golden_max(f, lo, hi);
        if (maximize && r.value > ext.sup) {
            ext.sup = r.value;
            ext.arg_sup = r.x;
        } else if (!maximize && -r.value < ext.inf) {
            ext.inf = -r.value;
            ext.arg_inf = r.x;
        }
    };
    polish(imax, true);
    polish(imin, false);

    // declared-tail contribution beyond s_far
    double far_arg = s_far - t;
    double bound = d.chi0.tail_bound_deriv_dev(far_arg) + d.chi1.tail_bound_value_dev(far_arg);
    double base = d.params.zeta * t + d.params.tau;
    if (base + bound > ext.sup) {
        ext.sup = base + bound;
        ext.arg_sup = s_far;
    }
    if (base - bound < ext.inf) {
        ext.inf = base - bound;
        ext.arg_inf = s_far;
    }
    return ext;
}

ShockState Trajectory::interpolate(double t) const {
    if (states.empty()) throw std::logic_error("Trajectory::interpolate: empty trajectory");
    if (t < t_begin() - 1e-12 || t > t_end() + 1e-12) {
        throw std::out_of_range("Trajectory::interpolate: t outside the trajectory range");
    }
    t = std::clamp(t, t_begin(), t_end());
    auto cmp = [](const ShockState& st, double tt) { return st.t < tt; };
    auto it = std::lower_bound(states.begin(), states.end(), t, cmp);
    if (it == states.begin()) return states.front();
    if (it == states.end()) return states.back();
    const ShockState& s1 = *it;
    const ShockState& s0 = *(it - 1);
    if (s1.t == t) return s1;
    ShockState out;
    out.t = t;
    out.sigma = num::hermite(s0.t, s0.sigma, s0.sigma_prime, s1.t, s1.sigma, s1.sigma_prime, t);
    out.sigma_prime =
        num::hermite_deriv(s0.t, s0.sigma, s0.sigma_prime, s1.t, s1.sigma, s1.sigma_prime, t);
    FieldValue v = field->eval(out.sigma, t);
    out.N_plus = v.chi_s;
    out.chit_plus = v.chi_t;
    return out;
}

namespace {

struct Stepper {
    const WaveField& field;
    double N1, tau, zeta, sigma0;

    double g(double t) const { return N1 - tau - zeta * t; }
    double sigma_of(double t, double u) const { return sigma0 + u / g(t); }

    // du/dt for u = (sigma - sigma0) * g(t). Written as
    //   [g*c1 + g*chi_t_dev + zeta*(sigma-sigma0)*chi_s_dev] / (g - chi_s_dev)
    // which is exactly c1 on the closed-form family (zero truncation).
    double rhs(double t, double u) const {
        double gv = g(t);
        double sigma = sigma_of(t, u);
        FieldValue v = field.eval(sigma, t);
        double den = gv - v.chi_s_dev;
        if (!(den > 0.0)) {
            throw std::runtime_error("integrate: constitutive breakdown at sigma = " +
                                     std::to_string(sigma) + ", t = " + std::to_string(t));
        }
        double c1 = field.data().chi1.affine().value_at_ref;
        double num = gv * c1 + gv * v.chi_t_dev + zeta * (sigma - sigma0) * v.chi_s_dev;
        return num / den;
    }
};

struct EventProbe {
    double lax = kInf;         // sigma' - (1 + margin)
    double second = kInf;      // (N1 - margin) - sup chi_s
    double floor_ = kInf;      // inf chi_s - (eta + margin)
};

}  // namespace

Trajectory integrate(std::shared_ptr<const InitialData> data, double horizon,
                     const TrackerOptions& options) {
    if (!data) throw std::invalid_argument("integrate: null data");
    {
        auto rep = validate(*data);
        if (!rep.pass) {
            std::string msg = "integrate: invalid initial data:";
            for (const auto& issue : rep.issues) msg += " [" + issue.message + "]";
            throw std::invalid_argument(msg);
        }
    }
    const auto& p = data->params;
    auto field = std::make_shared<WaveField>(data);
    Stepper st{*field, p.N1, p.tau, p.zeta, data->sigma0};

    Trajectory traj;
    traj.field = field;
    traj.data = data;
    traj.options = options;

    double T = time_of_threshold(p);
    double t_stop = horizon;
    Termination stop_cause = Termination::reached_horizon;
    if (std::isfinite(T)) {
        double guarded = T * (1.0 - options.guard_frac);
        if (guarded < t_stop) {
            t_stop = guarded;
            stop_cause = Termination::threshold_time_reached;
        }
    }
    double t_begin = options.start_time;
    double sigma_begin = options.start_sigma > 0.0 ? options.start_sigma : data->sigma0;
    if (!(t_begin >= 0.0) || !(sigma_begin >= data->sigma0)) {
        throw std::invalid_argument("integrate: invalid restart state");
    }
    if (!(t_stop > t_begin)) throw std::invalid_argument("integrate: empty time range");
    double radius = options.blow_up_radius_factor * data->sigma0;
    double span = options.monitor_span > 0.0 ? options.monitor_span : default_monitor_span(*data);
    double margin = options.event_margin;

    std::vector<double> outputs = options.output_times;
    std::sort(outputs.begin(), outputs.end());
    outputs.erase(std::unique(outputs.begin(), outputs.end()), outputs.end());
    std::size_t next_out = 0;
    while (next_out < outputs.size() && outputs[next_out] <= t_begin) ++next_out;

    auto probe_events = [&](double t, double sigma, double sigma_prime) {
        EventProbe e;
        e.lax = sigma_prime - (1.0 + margin);
        auto ext = monitor_chi_s_extrema(*field, t, sigma, span, options.monitor_points_per_decade);
        e.second = (p.N1 - margin) - ext.sup;
        e.floor_ = ext.inf - (p.eta + margin);
        return e;
    };

    auto make_state = [&](double t, double sigma, double sigma_prime) {
        ShockState s;
        s.t = t;
        s.sigma = sigma;
        s.sigma_prime = sigma_prime;
        FieldValue v = field->eval(sigma, t);
        s.N_plus = v.chi_s;
        s.chit_plus = v.chi_t;
        double drift = std::abs(v.chi - p.N1 * sigma);
        traj.drift.max_drift = std::max(traj.drift.max_drift, drift);
        traj.drift.max_drift_rel = std::max(traj.drift.max_drift_rel, drift / (1.0 + sigma));
        traj.drift.min_lax_margin = std::min(traj.drift.min_lax_margin, sigma_prime - 1.0);
        return s;
    };

    double t = t_begin;
    double u = (sigma_begin - data->sigma0) * st.g(t_begin);
    double k1 = st.rhs(t, u);
    {
        double sp0 = (k1 + p.zeta * (sigma_begin - data->sigma0)) / st.g(t);
        traj.states.push_back(make_state(t, sigma_begin, sp0));
    }
    EventProbe prev_probe = probe_events(t, sigma_begin, traj.states.front().sigma_prime);

    double span_t = t_stop - t_begin;
    double h = options.initial_step > 0.0 ? options.initial_step
                                          : std::min(1e-3 * std::max(1.0, span_t), span_t / 16.0);
    bool done = false;
    std::size_t max_steps = 40'000'000;

    auto finish_with_event = [&](Termination type, double t_ev, double u0, double du0, double t0,
                                 double u1, double du1, double t1, const std::string& detail) {
        double u_ev = num::hermite(t0, u0, du0, t1, u1, du1, t_ev);
        double sigma_ev = st.sigma_of(t_ev, u_ev);
        double sp_ev;
        try {
            sp_ev = step_rhs(*field, t_ev, sigma_ev);
        } catch (const std::runtime_error&) {
            sp_ev = traj.states.back().sigma_prime;
        }
        traj.states.push_back(make_state(t_ev, sigma_ev, sp_ev));
        traj.termination = type;
        traj.event = EventRecord{type, t_ev, detail};
        done = true;
    };

    std::size_t steps = 0;
    while (!done) {
        if (++steps > max_steps) throw std::runtime_error("integrate: step budget exhausted");
        double t_target = t_stop;
        if (next_out < outputs.size()) t_target = std::min(t_target, outputs[next_out]);
        // resolution caps: keep the stored trajectory dense enough to
        // interpolate, and resolve the approach to the threshold time
        double cap = 0.5 * (1.0 + t);
        if (std::isfinite(T)) cap = std::min(cap, 0.25 * std::max(T - t, 1e-300));
        h = std::min({h, options.max_step, cap, t_target - t});

        bool step_failed = false;
        double u_new = 0.0, err = 0.0, k_new = 0.0;
        try {
            double k2 = st.rhs(t + c2 * h, u + h * (a21 * k1));
            double k3 = st.rhs(t + c3 * h, u + h * (a31 * k1 + a32 * k2));
            double k4 = st.rhs(t + c4 * h, u + h * (a41 * k1 + a42 * k2 + a43 * k3));
            double k5 = st.rhs(t + c5 * h, u + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            double k6 = st.rhs(t + h, u + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 +
                                               a65 * k5));
            u_new = u + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            k_new = st.rhs(t + h, u_new);
            double e = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k_new);
            double scale = options.atol +
                           options.rtol * std::max(std::abs(u), std::abs(u_new));
            err = std::abs(e) / scale;
        } catch (const std::exception&) {
            step_failed = true;
        }

        if (step_failed || err > 1.0) {
            double shrink = step_failed ? 0.5 : std::max(0.2, 0.9 * std::pow(err, -0.2));
            h *= shrink;
            if (h < 1e-14 * std::max(1.0, std::abs(t))) {
                throw std::runtime_error(
                    "integrate: step size underflow at t = " + std::to_string(t) +
                    ", sigma = " + std::to_string(st.sigma_of(t, u)) + " (last valid state)");
            }
            continue;
        }

        double t_new = t + h;
        bool landed_output = false;
        if (next_out < outputs.size() && std::abs(t_new - outputs[next_out]) <=
                                             4.0 * std::numeric_limits<double>::epsilon() *
                                                 std::max(1.0, outputs[next_out])) {
            t_new = outputs[next_out];
            landed_output = true;
        }
        if (std::abs(t_new - t_stop) <=
            4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, t_stop)) {
            t_new = t_stop;
        }

        double sigma_new = st.sigma_of(t_new, u_new);
        double sp_new = (k_new + p.zeta * (sigma_new - data->sigma0)) / st.g(t_new);
        EventProbe probe = probe_events(t_new, sigma_new, sp_new);

        double t0 = t, u0 = u, du0 = k1, t1 = t_new, u1 = u_new, du1 = k_new;
        auto sigma_at = [&](double tt) {
            return st.sigma_of(tt, num::hermite(t0, u0, du0, t1, u1, du1, tt));
        };

        struct Cand {
            Termination type;
            double t_ev;
            std::string detail;
        };
        std::vector<Cand> cands;
        double bisect_tol = 1e-12;

        // bracket [ok, violated], return the violated end so the recorded
        // event state certifies the crossing
        auto locate_violation = [&](const std::function<double(double)>& f, double lo,
                                    double hi) {
            for (int i = 0; i < 200 && hi - lo > bisect_tol; ++i) {
                double mid = 0.5 * (lo + hi);
                if (f(mid) > 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return hi;
        };

        if (prev_probe.lax > 0.0 && probe.lax <= 0.0) {
            auto f = [&](double tt) {
                double sg = sigma_at(tt);
                double sp;
                try {
                    sp = step_rhs(*field, tt, sg);
                } catch (const std::runtime_error&) {
                    return -1.0;
                }
                return sp - (1.0 + margin);
            };
            double te = locate_violation(f, t0, t1);
            cands.push_back({Termination::lax_failure, te,
                             "shock speed reached the wave speed (sigma' <= 1 + margin)"});
        }
        if (prev_probe.second > 0.0 && probe.second <= 0.0) {
            auto f = [&](double tt) {
                auto ext = monitor_chi_s_extrema(*field, tt, sigma_at(tt), span,
                                                 options.monitor_points_per_decade);
                return (p.N1 - margin) - ext.sup;
            };
            double te = locate_violation(f, t0, t1);
            auto ext = monitor_chi_s_extrema(*field, te, sigma_at(te), span,
                                             options.monitor_points_per_decade);
            cands.push_back({Termination::second_shock, te,
                             "chi_s reached N1 - margin at s = " + num::format_shortest(ext.arg_sup)});
        }
        if (prev_probe.floor_ > 0.0 && probe.floor_ <= 0.0) {
            auto f = [&](double tt) {
                auto ext = monitor_chi_s_extrema(*field, tt, sigma_at(tt), span,
                                                 options.monitor_points_per_decade);
                return ext.inf - (p.eta + margin);
            };
            double te = locate_violation(f, t0, t1);
            auto ext = monitor_chi_s_extrema(*field, te, sigma_at(te), span,
                                             options.monitor_points_per_decade);
            cands.push_back({Termination::tension_floor, te,
                             "chi_s reached eta + margin at s = " + num::format_shortest(ext.arg_inf)});
        }
        if (sigma_new >= radius) {
            double te = t1;
            if (sigma_at(t0) < radius) {
                auto f = [&](double tt) { return radius - sigma_at(tt); };
                te = locate_violation(f, t0, t1);
            }
            cands.push_back({Termination::blow_up_certified, te,
                             "front passed the blow-up radius " + num::format_shortest(radius)});
        }

        if (!cands.empty()) {
            auto first = std::min_element(cands.begin(), cands.end(),
                                          [](const Cand& a, const Cand& b) { return a.t_ev < b.t_ev; });
            // an event landing exactly on the stop time is the far-field
            // threshold phenomenon, not an interior event
            bool at_stop = t_new >= t_stop &&
                           first->t_ev >= t_stop - 1e-11 * std::max(1.0, t_stop);
            if (!at_stop) {
                finish_with_event(first->type, first->t_ev, u0, du0, t0, u1, du1, t1,
                                  first->detail);
                break;
            }
        }

        // accept
        t = t_new;
        u = u_new;
        k1 = k_new;
        prev_probe = probe;
        traj.states.push_back(make_state(t, sigma_new, sp_new));
        if (landed_output) ++next_out;
        if (t >= t_stop) {
            traj.termination = stop_cause;
            if (stop_cause == Termination::threshold_time_reached) {
                traj.event = EventRecord{stop_cause, t, "prescribed end tension about to reach N1"};
            }
            done = true;
            break;
        }
        h *= std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
    }
    return traj;
}

ContinuationReport continuation_check(const Trajectory& traj, double t) {
    ContinuationReport rep;
    ShockState s = traj.interpolate(t);
    const auto& p = traj.data->params;
    double margin = traj.options.event_margin;
    rep.sigma = s.sigma;
    rep.sigma_finite = std::isfinite(s.sigma) &&
                       s.sigma < traj.options.blow_up_radius_factor * traj.data->sigma0;
    double span = traj.options.monitor_span > 0.0 ? traj.options.monitor_span
                                                  : default_monitor_span(*traj.data);
    auto ext = monitor_chi_s_extrema(*traj.field, t, s.sigma, span,
                                     traj.options.monitor_points_per_decade);
    rep.margin_to_N1 = p.N1 - ext.sup;
    rep.margin_to_eta = ext.inf - p.eta;
    rep.range_ok = rep.margin_to_N1 > margin && rep.margin_to_eta > margin;
    double den = p.N1 - s.N_plus;
    rep.trace_ratio = den > 0.0 ? s.chit_plus / den : kInf;
    rep.lax_ok = std::isfinite(rep.trace_ratio) && rep.trace_ratio > 1.0 + margin;
    rep.pass = rep.sigma_finite && rep.range_ok && rep.lax_ok;
    return rep;
}

}  // namespace slshock
