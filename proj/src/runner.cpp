#include "slshock/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace slshock {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::vector<double> log_grid(double a, double b, double per_decade) {
    return num::geometric_grid(a, b, per_decade);
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string csv = "t,sigma,sigma_prime,N_plus,chit_plus,rh_residual\n";
    for (const auto& s : traj.states) {
        double N_minus = s.N_plus + s.sigma_prime * s.sigma_prime *
                                        (traj.data->params.N1 - s.N_plus);
        double residual = (s.N_plus - N_minus) + s.sigma_prime * s.chit_plus;
        csv += num::format_sig17(s.t) + "," + num::format_sig17(s.sigma) + "," +
               num::format_sig17(s.sigma_prime) + "," + num::format_sig17(s.N_plus) + "," +
               num::format_sig17(s.chit_plus) + "," + num::format_sig17(residual) + "\n";
    }
    return csv;
}

std::string state_csv(const Trajectory& traj, double t, double span, int n_points) {
    ShockState front = traj.interpolate(t);
    double hi = front.sigma + span;
    std::string csv = "s,region,chi,nu,N,chit\n";
    for (int i = 0; i < n_points; ++i) {
        double s = hi * static_cast<double>(i) / static_cast<double>(n_points - 1);
        if (s - t < traj.data->sigma0 && s >= front.sigma) {
            continue;  // outside the reconstructed dependence domain
        }
        StateSample smp = sample_state(traj, s, t);
        csv += num::format_sig17(smp.s) + "," +
               (smp.region == Region::inextensible ? "inextensible" : "extensible") + "," +
               num::format_sig17(smp.chi) + "," + num::format_sig17(smp.nu) + "," +
               num::format_sig17(smp.N) + "," + num::format_sig17(smp.chit) + "\n";
    }
    return csv;
}

std::string energy_csv(const EnergyAudit& audit) {
    std::string csv = "t,K,E_stored,P,Q,balance_defect\n";
    for (std::size_t i = 0; i < audit.rows.size(); ++i) {
        const auto& r = audit.rows[i];
        csv += num::format_sig17(r.t) + "," + num::format_sig17(r.K) + "," +
               num::format_sig17(r.E_stored) + "," + num::format_sig17(r.P) + "," +
               num::format_sig17(r.Q) + "," + num::format_sig17(audit.defects[i]) + "\n";
    }
    return csv;
}

std::string fv_front_csv(const FvResult& fv) {
    std::string csv = "t,sigma,sigma_prime,N_plus,chit_plus,rh_residual\n";
    for (const auto& f : fv.front) {
        double residual = (f.N_ahead - f.N_block) + f.speed_est * f.v_ahead;
        csv += num::format_sig17(f.t) + "," + num::format_sig17(f.position) + "," +
               num::format_sig17(f.speed_est) + "," + num::format_sig17(f.N_ahead) + "," +
               num::format_sig17(f.v_ahead) + "," + num::format_sig17(residual) + "\n";
    }
    return csv;
}

std::string fv_snapshot_csv(const FvSnapshot& snap) {
    std::string csv = "s,v,w,N\n";
    for (std::size_t i = 0; i < snap.s.size(); ++i) {
        csv += num::format_sig17(snap.s[i]) + "," + num::format_sig17(snap.v[i]) + "," +
               num::format_sig17(snap.w[i]) + "," + num::format_sig17(snap.N[i]) + "\n";
    }
    return csv;
}

double max_rh_residual(const Trajectory& traj) {
    double worst = 0.0;
    for (const auto& s : traj.states) {
        double N_minus = s.N_plus + s.sigma_prime * s.sigma_prime *
                                        (traj.data->params.N1 - s.N_plus);
        double residual = std::abs((s.N_plus - N_minus) + s.sigma_prime * s.chit_plus);
        worst = std::max(worst, residual / (1.0 + std::abs(s.N_plus - N_minus)));
    }
    return worst;
}

ordered_json fit_json(const FitResult& f) {
    return ordered_json{{"exponent", f.exponent},
                        {"ci95", f.ci95},
                        {"r2", f.r2},
                        {"intercept", f.intercept},
                        {"n_points", f.n_points}};
}

bool is_event_termination(Termination t) {
    switch (t) {
        case Termination::lax_failure:
        case Termination::second_shock:
        case Termination::tension_floor:
        case Termination::blow_up_certified:
            return true;
        default:
            return false;
    }
}

struct AuditPlan {
    double a, b, t0, t1;
    int n;
};

AuditPlan plan_audit(const RunConfig& cfg, const Trajectory& traj) {
    AuditPlan plan;
    plan.n = std::max(cfg.audit.n, 8);
    double t_end = traj.t_end();
    plan.t0 = cfg.audit.t0 > 0.0 ? cfg.audit.t0 : 0.02 * t_end;
    plan.t1 = cfg.audit.t1 > 0.0 ? cfg.audit.t1 : 0.95 * t_end;
    if (!(plan.t1 > plan.t0)) throw std::invalid_argument("energy audit: empty time window");
    plan.a = cfg.audit.a > 0.0 ? cfg.audit.a : 0.5 * traj.data->sigma0;
    if (cfg.audit.b > 0.0) {
        plan.b = cfg.audit.b;
    } else {
        double sig1 = traj.interpolate(plan.t1).sigma;
        plan.b = std::max(sig1 + 1.0, traj.data->sigma0 + plan.t1) + 1.0;
    }
    return plan;
}

std::vector<double> audit_grid(const AuditPlan& plan) {
    std::vector<double> g(static_cast<std::size_t>(plan.n));
    for (int i = 0; i < plan.n; ++i) {
        g[static_cast<std::size_t>(i)] =
            plan.t0 + (plan.t1 - plan.t0) * static_cast<double>(i) /
                          static_cast<double>(plan.n - 1);
    }
    return g;
}

}  // namespace

FitResult fit_decay(const std::vector<std::pair<double, double>>& series, FitMode mode,
                    std::optional<double> T, double noise_floor) {
    if (mode == FitMode::power_in_T_minus_t && !T) {
        throw std::invalid_argument("fit_decay: T required in power_in_T_minus_t mode");
    }
    std::vector<double> x, y;
    for (const auto& [t, v] : series) {
        if (!(v > noise_floor)) continue;
        double abscissa = mode == FitMode::power_in_1_plus_t ? 1.0 + t : *T - t;
        if (!(abscissa > 0.0)) continue;
        x.push_back(std::log(abscissa));
        y.push_back(std::log(v));
    }
    if (x.size() < 20) {
        throw std::invalid_argument("fit_decay: need at least 20 points above the noise floor, got " +
                                    std::to_string(x.size()));
    }
    num::LineFit lf = num::ols(x, y);
    FitResult out;
    out.exponent = lf.slope;
    out.intercept = lf.intercept;
    out.r2 = lf.r2;
    out.ci95 = 1.96 * lf.slope_stderr;
    out.n_points = lf.n;
    return out;
}

RunOutcome run(const RunConfig& cfg, const std::string& out_dir) {
    auto wall_start = std::chrono::steady_clock::now();
    fs::path dir = out_dir.empty() ? fs::path("out") : fs::path(out_dir);
    fs::create_directories(dir);

    ordered_json summary;
    summary["scenario"] = to_string(cfg.scenario);
    summary["config_hash"] = cfg.content_hash;

    NondimensionalParams nd = config_params(cfg);
    double T = time_of_threshold(nd);

    RunOutcome outcome;
    outcome.out_dir = dir.string();

    auto finalize = [&](int code) {
        auto wall_end = std::chrono::steady_clock::now();
        summary["wall_time_s"] =
            std::chrono::duration<double>(wall_end - wall_start).count();
        ordered_json echo;
        for (const auto& [k, v] : cfg.echo) echo[k] = v;
        summary["config"] = echo;
        outcome.exit_code = code;
        outcome.summary_json = summary.dump(2) + "\n";
        write_file(dir / "summary.json", outcome.summary_json);
        return outcome;
    };

    auto record_trajectory = [&](const Trajectory& traj) {
        write_file(dir / "trajectory.csv", trajectory_csv(traj));
        summary["termination"] = to_string(traj.termination);
        if (traj.event) {
            summary["event"] = ordered_json{{"type", to_string(traj.event->type)},
                                            {"t", traj.event->t},
                                            {"detail", traj.event->detail}};
        }
        const auto& last = traj.states.back();
        summary["final"] = ordered_json{
            {"t", last.t}, {"sigma", last.sigma}, {"sigma_prime", last.sigma_prime}};
        summary["max_rh_residual"] = max_rh_residual(traj);
        summary["min_lax_margin"] = traj.drift.min_lax_margin;
        summary["max_front_drift_rel"] = traj.drift.max_drift_rel;
        summary["steps"] = traj.states.size();
    };

    auto write_snapshots = [&](const Trajectory& traj) {
        double span = traj.options.monitor_span > 0.0 ? traj.options.monitor_span
                                                      : default_monitor_span(*traj.data);
        int idx = 0;
        ordered_json snaps = ordered_json::array();
        for (double t : cfg.snapshot_times) {
            if (t < traj.t_begin() || t > traj.t_end()) continue;
            char name[32];
            std::snprintf(name, sizeof(name), "state_%03d.csv", idx);
            write_file(dir / name, state_csv(traj, t, span, cfg.snapshot_points));
            snaps.push_back(ordered_json{{"t", t}, {"file", name}});
            ++idx;
        }
        if (!snaps.empty()) summary["snapshots"] = snaps;
    };

    auto maybe_audit = [&](const Trajectory& traj) {
        if (!cfg.audit.enabled) return;
        try {
            AuditPlan plan = plan_audit(cfg, traj);
            EnergyAudit audit = energy_audit(traj, plan.a, plan.b, audit_grid(plan));
            write_file(dir / "energy.csv", energy_csv(audit));
            summary["energy"] = ordered_json{{"max_balance_defect", audit.max_defect},
                                             {"defect_scale", audit.max_defect_scale},
                                             {"entropy_ok", audit.entropy_ok},
                                             {"a", plan.a},
                                             {"b", plan.b}};
        } catch (const std::exception& e) {
            summary["energy"] = ordered_json{{"skipped", e.what()}};
        }
    };

    switch (cfg.scenario) {
        case Scenario::simulate: {
            auto data = std::make_shared<InitialData>(build_initial_data(cfg));
            TrackerOptions opts = cfg.solver;
            for (double t : cfg.snapshot_times) opts.output_times.push_back(t);
            Trajectory traj = integrate(data, cfg.horizon, opts);
            record_trajectory(traj);
            write_snapshots(traj);
            maybe_audit(traj);
            return finalize(is_event_termination(traj.termination) ? 2 : 0);
        }
        case Scenario::oracle_compare: {
            auto data = std::make_shared<InitialData>(build_initial_data(cfg));
            Trajectory traj = integrate(data, cfg.horizon, cfg.solver);
            record_trajectory(traj);
            OracleMotion motion{nd, cfg.sigma0, data->sigma1};
            double worst = 0.0;
            for (const auto& s : traj.states) {
                OracleFront f = oracle_front(motion, s.t);
                worst = std::max(worst, std::abs(s.sigma - f.sigma));
            }
            summary["oracle_max_error"] = worst;
            maybe_audit(traj);
            return finalize(is_event_termination(traj.termination) ? 2 : 0);
        }
        case Scenario::stability_zeta0: {
            if (nd.zeta != 0.0) {
                throw std::invalid_argument("stability_zeta0 requires zeta = 0");
            }
            auto data = std::make_shared<InitialData>(build_initial_data(cfg));
            TrackerOptions opts = cfg.solver;
            auto samples = log_grid(cfg.fit.t_min, cfg.fit.t_max, cfg.fit.samples_per_decade);
            opts.output_times = samples;
            Trajectory traj = integrate(data, cfg.fit.t_max, opts);
            record_trajectory(traj);
            OracleMotion ref{nd, cfg.sigma0, sigma1_infinity(*data)};
            std::string dev_csv =
                "t,weighted_second_sup,chis_dev_sup,chit_dev_sup,state_dev_sup,"
                "speed_ratio_dev,inext_tension_ratio_dev\n";
            std::vector<std::pair<double, double>> chit_series, speed_series;
            for (double t : samples) {
                if (t > traj.t_end()) break;
                DeviationRecord recd = asymptotic_deviation(traj, ref, t, cfg.fit.r);
                dev_csv += num::format_sig17(t) + "," +
                           num::format_sig17(recd.weighted_second_sup) + "," +
                           num::format_sig17(recd.chis_dev_sup) + "," +
                           num::format_sig17(recd.chit_dev_sup) + "," +
                           num::format_sig17(recd.state_dev_sup) + "," +
                           num::format_sig17(recd.speed_ratio_dev) + "," +
                           num::format_sig17(recd.inext_tension_ratio_dev) + "\n";
                chit_series.emplace_back(t, recd.chit_dev_sup);
                speed_series.emplace_back(t, recd.speed_ratio_dev);
            }
            write_file(dir / "deviations.csv", dev_csv);
            summary["sigma1_infinity"] = ref.sigma1;
            summary["B"] = weighted_norm_B(*data, cfg.fit.r, WeightPower::r_plus_1);
            ordered_json fits;
            fits["chit_dev"] = fit_json(fit_decay(chit_series, FitMode::power_in_1_plus_t,
                                                  std::nullopt, cfg.fit.noise_floor));
            fits["speed_ratio_dev"] = fit_json(fit_decay(speed_series, FitMode::power_in_1_plus_t,
                                                         std::nullopt, cfg.fit.noise_floor));
            summary["fits"] = fits;
            summary["event_free"] = !is_event_termination(traj.termination);
            maybe_audit(traj);
            return finalize(is_event_termination(traj.termination) ? 2 : 0);
        }
        case Scenario::stability_zetapos: {
            if (!(nd.zeta > 0.0)) {
                throw std::invalid_argument("stability_zetapos requires zeta > 0");
            }
            auto data = std::make_shared<InitialData>(build_initial_data(cfg));
            TrackerOptions opts = cfg.solver;
            // sample on a grid of gaps T - t approaching the blow-up time
            double delta_max = 0.5 * T;
            double delta_min = 3e-6 * T;
            std::vector<double> samples;
            for (double d : log_grid(delta_min, delta_max, cfg.fit.samples_per_decade)) {
                samples.push_back(T - d);
            }
            std::sort(samples.begin(), samples.end());
            opts.output_times = samples;
            Trajectory traj = integrate(data, T, opts);
            record_trajectory(traj);
            OracleMotion ref{nd, cfg.sigma0, sigma1_infinity(*data)};
            std::string dev_csv =
                "t,weighted_second_sup,chis_dev_sup,chit_dev_sup,state_dev_sup,"
                "speed_ratio_dev,inext_tension_ratio_dev,N_inext\n";
            std::vector<std::pair<double, double>> tension_series, speed_series;
            for (double t : samples) {
                if (t > traj.t_end()) break;
                DeviationRecord recd = asymptotic_deviation(traj, ref, t, cfg.fit.r);
                double N0 = sample_state(traj, 0.0, t).N;
                dev_csv += num::format_sig17(t) + "," +
                           num::format_sig17(recd.weighted_second_sup) + "," +
                           num::format_sig17(recd.chis_dev_sup) + "," +
                           num::format_sig17(recd.chit_dev_sup) + "," +
                           num::format_sig17(recd.state_dev_sup) + "," +
                           num::format_sig17(recd.speed_ratio_dev) + "," +
                           num::format_sig17(recd.inext_tension_ratio_dev) + "," +
                           num::format_sig17(N0) + "\n";
                tension_series.emplace_back(t, N0);
                // the tail power law holds once the front has outrun the
                // data bumps; keep the top three signal decades
                if (T - t <= 0.1 * T) speed_series.emplace_back(t, recd.speed_ratio_dev);
            }
            double top = 0.0;
            for (const auto& [t, v] : speed_series) top = std::max(top, v);
            std::vector<std::pair<double, double>> speed_window;
            for (const auto& [t, v] : speed_series) {
                if (v >= std::max(top * 1e-3, 3e-9)) speed_window.emplace_back(t, v);
            }
            write_file(dir / "deviations.csv", dev_csv);
            summary["sigma1_infinity"] = ref.sigma1;
            summary["B"] = weighted_norm_B(*data, cfg.fit.r, WeightPower::r_plus_2);
            summary["T_zeta"] = T;
            ordered_json fits;
            fits["inext_tension"] = fit_json(
                fit_decay(tension_series, FitMode::power_in_T_minus_t, T, cfg.fit.noise_floor));
            fits["speed_ratio_dev"] = fit_json(
                fit_decay(speed_window, FitMode::power_in_T_minus_t, T, cfg.fit.noise_floor));
            summary["fits"] = fits;
            summary["blow_up_certified"] =
                traj.termination == Termination::blow_up_certified;
            return finalize(is_event_termination(traj.termination) ? 2 : 0);
        }
        case Scenario::instability_demo: {
            auto data = std::make_shared<InitialData>(build_initial_data(cfg));
            double horizon = std::isfinite(T) ? T : cfg.horizon;
            Trajectory traj = integrate(data, horizon, cfg.solver);
            record_trajectory(traj);
            write_snapshots(traj);
            return finalize(is_event_termination(traj.termination) ? 2 : 0);
        }
        case Scenario::energy_audit: {
            auto data = std::make_shared<InitialData>(build_initial_data(cfg));
            TrackerOptions opts = cfg.solver;
            Trajectory tmp = integrate(data, cfg.horizon, opts);
            AuditPlan plan = plan_audit(cfg, tmp);
            auto grid = audit_grid(plan);
            opts.output_times = grid;
            Trajectory traj = integrate(data, cfg.horizon, opts);
            record_trajectory(traj);
            EnergyAudit audit = energy_audit(traj, plan.a, plan.b, grid);
            write_file(dir / "energy.csv", energy_csv(audit));
            summary["energy"] = ordered_json{{"max_balance_defect", audit.max_defect},
                                             {"defect_scale", audit.max_defect_scale},
                                             {"entropy_ok", audit.entropy_ok},
                                             {"a", plan.a},
                                             {"b", plan.b}};
            write_snapshots(traj);
            return finalize(is_event_termination(traj.termination) ? 2 : 0);
        }
        case Scenario::crossvalidate: {
            auto data = std::make_shared<InitialData>(build_initial_data(cfg));
            Trajectory traj = integrate(data, cfg.fv.t_end, cfg.solver);
            record_trajectory(traj);

            FvOptions coarse = cfg.fv;
            FvResult fv1 = fv_run(*data, coarse);
            FvOptions fine = cfg.fv;
            fine.ds = 0.5 * cfg.fv.ds;
            FvResult fv2 = fv_run(*data, fine);
            write_file(dir / "fv_front.csv", fv_front_csv(fv1));
            write_file(dir / "fv_front_fine.csv", fv_front_csv(fv2));
            int idx = 0;
            for (const auto& snap : fv1.snapshots) {
                char name[32];
                std::snprintf(name, sizeof(name), "fv_state_%03d.csv", idx++);
                write_file(dir / name, fv_snapshot_csv(snap));
            }

            auto front_error = [&](const FvResult& fv) {
                double worst = 0.0;
                for (const auto& f : fv.front) {
                    if (f.t > traj.t_end()) continue;
                    double sigma = traj.interpolate(f.t).sigma;
                    worst = std::max(worst, std::abs(f.position - sigma));
                }
                return worst;
            };
            double err1 = front_error(fv1);
            double err2 = front_error(fv2);
            double plateau = fv1.front.back().N_block;
            double tracked_Nminus = [&]() {
                const auto& last = traj.states.back();
                return last.N_plus +
                       last.sigma_prime * last.sigma_prime * (nd.N1 - last.N_plus);
            }();
            summary["fv"] = ordered_json{
                {"ds", coarse.ds},
                {"front_error", err1},
                {"front_error_cells", err1 / coarse.ds},
                {"front_error_half_ds", err2},
                {"convergence_ratio", err2 > 0.0 ? err1 / err2 : 0.0},
                {"plateau_tension", plateau},
                {"tracked_tension_behind", tracked_Nminus},
                {"plateau_rel_error", std::abs(plateau - tracked_Nminus) /
                                          std::max(1.0, std::abs(tracked_Nminus))},
                {"steps", fv1.steps},
                {"riemann_fallbacks", fv1.riemann_fallbacks}};
            return finalize(is_event_termination(traj.termination) ? 2 : 0);
        }
    }
    throw std::logic_error("run: unhandled scenario");
}

}  // namespace slshock
