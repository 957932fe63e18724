#include "slshock/fv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "slshock/material.hpp"

namespace slshock {

namespace {

struct Flux {
    double fw = 0.0;
    double fv = 0.0;
    double speed = 1.0;
};

struct RiemannSolver {
    double nu1;
    std::size_t fallbacks = 0;

    // saturated middle state between two extensible states; returns false
    // when the states do not actually compress into saturation
    bool two_shock(double wL, double vL, double wR, double vR, double& vm, double& Nm,
                   double& smax) {
        double aL = nu1 - wL;
        double aR = nu1 - wR;
        double dv = vR - vL;
        if (!(aL > 0.0) || !(aR > 0.0) || !(dv > 0.0)) return false;
        auto f = [&](double x) {
            double y = dv - x;
            return x * x / aL - y * y / aR - (wR - wL);
        };
        double lo = 0.0, hi = dv;
        if (!(f(lo) < 0.0) || !(f(hi) > 0.0)) return false;
        for (int i = 0; i < 100; ++i) {
            double mid = 0.5 * (lo + hi);
            if (f(mid) > 0.0) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        double x = 0.5 * (lo + hi);
        vm = vL + x;
        Nm = wL + x * x / aL;
        smax = std::max(x / aL, (dv - x) / aR);
        return true;
    }

    Flux ext_ext(double wL, double vL, double wR, double vR) {
        double wm = 0.5 * (wL + wR) + 0.5 * (vR - vL);
        if (wm < nu1) {
            double vm = 0.5 * (vL + vR) + 0.5 * (wR - wL);
            return {-vm, -wm, 1.0};
        }
        double vm, Nm, smax;
        if (two_shock(wL, vL, wR, vR, vm, Nm, smax)) {
            return {-vm, -Nm, std::max(1.0, smax)};
        }
        double vm_lin = 0.5 * (vL + vR) + 0.5 * (wR - wL);
        return {-vm_lin, -std::min(wm, nu1), 1.0};
    }

    // saturated block on the left moving at vL, extensible state on the right
    Flux sat_ext(double vL, double wR, double vR, double NL) {
        double aR = nu1 - wR;
        double dv = vR - vL;
        if (aR > 0.0 && dv >= aR) {
            double sp = dv / aR;
            double Nm = wR + dv * dv / aR;
            return {-vL, -Nm, sp};
        }
        // receding or neutral contact: treat the block face as extensible
        ++fallbacks;
        (void)NL;
        return ext_ext(nu1, vL, wR, vR);
    }

    Flux ext_sat(double wL, double vL, double vR, double NR) {
        Flux m = sat_ext(-vR, wL, -vL, NR);
        return {m.fw, -m.fv, m.speed};
    }

    Flux solve(bool satL, double wL, double vL, double NL, bool satR, double wR, double vR,
               double NR) {
        if (satL && satR) {
            return {-0.5 * (vL + vR), -0.5 * (NL + NR), 1.0};
        }
        if (satL) return sat_ext(vL, wR, vR, NL);
        if (satR) return ext_sat(wL, vL, vR, NR);
        return ext_ext(wL, vL, wR, vR);
    }
};

// leftmost midpoint crossing of w locates the front cell; within it the
// fill fraction (w - w_ahead)/(nu1 - w_ahead) recovers the sub-cell front
// position exactly for the captured two-state structure (sum of w is
// conserved, so the filled volume is the front coordinate)
double front_position(const std::vector<double>& w, double nu1, double ds) {
    std::size_t n = w.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double thresh = 0.5 * (nu1 + w[i + 1]);
        if (w[i] >= thresh && w[i + 1] < thresh) {
            std::size_t k = w[i] >= nu1 - 1e-12 ? i + 1 : i;  // mixed cell
            double w_ref = w[std::min(k + 3, n - 1)];
            double denom = nu1 - w_ref;
            double fill = denom > 1e-12 ? (w[k] - w_ref) / denom : 0.0;
            fill = std::clamp(fill, 0.0, 1.0);
            return static_cast<double>(k) * ds + fill * ds;
        }
    }
    return 0.0;
}

}  // namespace

FvResult fv_run(const InitialData& data, const FvOptions& opt) {
    const auto& p = data.params;
    double nu1 = p.N1;  // gamma = E = 1 units
    double T = time_of_threshold(p);
    if (std::isfinite(T) && !(opt.t_end <= 0.8 * T)) {
        throw std::invalid_argument("fv_run: t_end must stay below 0.8*T(zeta)");
    }
    if (!(opt.ds > 0.0) || !(opt.S > data.sigma0)) {
        throw std::invalid_argument("fv_run: need ds > 0 and S > sigma0");
    }
    {
        double gap = p.N1 - p.tau - p.zeta * opt.t_end;
        double sigma_est = data.sigma0 + data.sigma1 * (p.N1 - p.tau) * opt.t_end / gap;
        if (!((1.0 - opt.boundary_margin) * opt.S >= sigma_est + opt.t_end)) {
            throw std::invalid_argument(
                "fv_run: S too small, right boundary inside the front's domain of influence");
        }
    }

    std::size_t n = static_cast<std::size_t>(std::llround(opt.S / opt.ds));
    double ds = opt.S / static_cast<double>(n);
    std::vector<double> w(n), v(n), N(n);
    std::vector<char> sat(n, 0);

    for (std::size_t i = 0; i < n; ++i) {
        double xl = static_cast<double>(i) * ds;
        double xr = xl + ds;
        w[i] = (data.chi0_at(xr) - data.chi0_at(xl)) / ds;
        double cl = data.chi1_cumulative(xl);
        double cr = data.chi1_cumulative(xr);
        v[i] = (cr - cl) / ds;
    }
    double N_block0 = data.N0_at(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (w[i] >= nu1 - 1e-12) {
            sat[i] = 1;
            w[i] = nu1;
            N[i] = N_block0;
        } else {
            N[i] = w[i];
        }
    }

    RiemannSolver rs{nu1};
    FvResult out;
    double t = 0.0;
    double speed_est = data.sigma1;
    double next_front_sample = 0.0;
    std::size_t next_snap = 0;
    std::vector<double> snaps = opt.snapshot_times;
    std::sort(snaps.begin(), snaps.end());

    std::vector<double> fw(n + 1), fvx(n + 1);

    auto record_front = [&]() {
        FvFrontPoint fp;
        fp.t = t;
        fp.position = front_position(w, nu1, ds);
        std::size_t k = 0;
        while (k < n && sat[k]) ++k;
        std::size_t j = std::min(k + 3, n - 1);
        fp.N_ahead = N[j];
        fp.v_ahead = v[j];
        fp.N_block = k > 0 ? N[0] : N_block0;
        double aR = nu1 - w[j];
        fp.speed_est = aR > 1e-12 ? v[j] / aR : 0.0;
        out.front.push_back(fp);
    };
    auto record_energy = [&]() {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double stored = sat[i] ? 0.5 * nu1 * nu1 : 0.5 * w[i] * w[i];
            total += ds * (0.5 * v[i] * v[i] + stored);
        }
        double Nb = p.zeta * t + p.tau;
        out.energy.push_back({t, total, Nb * v[n - 1]});
    };
    auto record_snapshot = [&]() {
        FvSnapshot snap;
        snap.t = t;
        snap.s.resize(n);
        snap.v = v;
        snap.w = w;
        snap.N = N;
        for (std::size_t i = 0; i < n; ++i) snap.s[i] = (static_cast<double>(i) + 0.5) * ds;
        out.snapshots.push_back(std::move(snap));
    };

    record_front();
    record_energy();
    next_front_sample = opt.front_sample_dt;

    while (t < opt.t_end - 1e-14) {
        // CFL from the settled front-speed estimate; transient interface
        // ratios at a nearly full cell are not stability-relevant
        double c = std::max(1.0, speed_est) * 1.3;
        double dt = std::min(opt.cfl * ds / c, opt.t_end - t);
        if (next_snap < snaps.size()) dt = std::min(dt, std::max(snaps[next_snap] - t, 1e-14));

        // wall interface: mirror ghost, zero velocity flux
        {
            Flux f = rs.solve(sat[0], w[0], -v[0], N[0], sat[0], w[0], v[0], N[0]);
            fw[0] = f.fw;
            fvx[0] = f.fv;
        }
        double step_speed = 1.0;
        for (std::size_t i = 1; i < n; ++i) {
            Flux f = rs.solve(sat[i - 1], w[i - 1], v[i - 1], N[i - 1], sat[i], w[i], v[i], N[i]);
            fw[i] = f.fw;
            fvx[i] = f.fv;
            step_speed = std::max(step_speed, f.speed);
        }
        {
            double wg = p.zeta * t + p.tau;
            double vg = v[n - 1] + (wg - w[n - 1]);
            Flux f = rs.solve(sat[n - 1], w[n - 1], v[n - 1], N[n - 1], false, wg, vg, wg);
            fw[n] = f.fw;
            fvx[n] = f.fv;
        }
        out.max_wave_speed = std::max(out.max_wave_speed, step_speed);

        double lam = dt / ds;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] -= lam * (fw[i + 1] - fw[i]);
            v[i] -= lam * (fvx[i + 1] - fvx[i]);
        }

        // saturation sweep: clip onto w = nu1, push the excess stretch into
        // the right neighbour (keeps sum(w) exact so the captured front
        // cannot drift), absorb the cell momentum into the rigid block
        for (std::size_t i = 0; i < n; ++i) {
            if (sat[i]) {
                if (w[i] < nu1 - 1e-12) {
                    sat[i] = 0;
                    N[i] = w[i];
                } else {
                    double exc = w[i] - nu1;
                    w[i] = nu1;
                    if (i + 1 < n) w[i + 1] += exc;
                    if (i == 0 || sat[i - 1]) v[i] = 0.0;
                }
            } else if (w[i] >= nu1) {
                double exc = w[i] - nu1;
                w[i] = nu1;
                if (i + 1 < n) w[i + 1] += exc;
                sat[i] = 1;
                v[i] = (i == 0 || sat[i - 1]) ? 0.0 : v[i];
            }
            if (!(w[i] > 0.0) || w[i] > nu1 + opt.w_tolerance) {
                throw std::runtime_error("fv_run: stretch left (0, nu1] in cell " +
                                         std::to_string(i) + " at t = " + std::to_string(t) +
                                         " (w = " + std::to_string(w[i]) + ")");
            }
        }

        // instantaneous tension in the wall-attached block, read from the
        // first settled cell beyond the captured front structure
        std::size_t k = 0;
        while (k < n && sat[k]) ++k;
        if (k > 0 && k < n) {
            std::size_t j = std::min(k + 3, n - 1);
            double aR = nu1 - w[j];
            if (aR > 1e-12) {
                double Nb = w[j] + v[j] * v[j] / aR;
                for (std::size_t i = 0; i < k; ++i) N[i] = Nb;
                speed_est = v[j] / aR;
            }
        }
        for (std::size_t i = k; i < n; ++i) {
            if (!sat[i]) N[i] = w[i];
        }

        t += dt;
        ++out.steps;
        if (t >= next_front_sample - 1e-14 || t >= opt.t_end - 1e-14) {
            record_front();
            record_energy();
            next_front_sample += opt.front_sample_dt;
        }
        if (next_snap < snaps.size() && t >= snaps[next_snap] - 1e-14) {
            record_snapshot();
            ++next_snap;
        }
    }
    out.riemann_fallbacks = rs.fallbacks;
    return out;
}

}  // namespace slshock
