#include "slshock/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace slshock {

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::simulate: return "simulate";
        case Scenario::oracle_compare: return "oracle_compare";
        case Scenario::stability_zeta0: return "stability_zeta0";
        case Scenario::stability_zetapos: return "stability_zetapos";
        case Scenario::instability_demo: return "instability_demo";
        case Scenario::energy_audit: return "energy_audit";
        case Scenario::crossvalidate: return "crossvalidate";
    }
    return "unknown";
}

Scenario scenario_from_string(const std::string& s) {
    if (s == "simulate") return Scenario::simulate;
    if (s == "oracle_compare") return Scenario::oracle_compare;
    if (s == "stability_zeta0") return Scenario::stability_zeta0;
    if (s == "stability_zetapos") return Scenario::stability_zetapos;
    if (s == "instability_demo") return Scenario::instability_demo;
    if (s == "energy_audit") return Scenario::energy_audit;
    if (s == "crossvalidate") return Scenario::crossvalidate;
    throw std::invalid_argument("unknown scenario: " + s);
}

namespace {

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

struct KeyValue {
    std::string value;
    int line = 0;
    bool used = false;
};

struct ParsedText {
    std::map<std::string, KeyValue> kv;  // "section.key" -> value
    std::string origin;
};

ParsedText parse_raw(const std::string& text, const std::string& origin) {
    ParsedText out;
    out.origin = origin;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto cut = line.find_first_of("#;");
        if (cut != std::string::npos) line.erase(cut);
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') {
                throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                            ": malformed section header");
            }
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                        ": expected key = value");
        }
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty()) {
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": empty key");
        }
        std::string full = section.empty() ? key : section + "." + key;
        out.kv[full] = {value, lineno, false};
    }
    return out;
}

class Reader {
public:
    explicit Reader(ParsedText text) : text_(std::move(text)) {}

    std::optional<std::string> raw(const std::string& key) {
        auto it = text_.kv.find(key);
        if (it == text_.kv.end()) return std::nullopt;
        it->second.used = true;
        return it->second.value;
    }

    double number(const std::string& key, double fallback) {
        auto v = raw(key);
        if (!v) return fallback;
        try {
            std::size_t pos = 0;
            double x = std::stod(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("trailing characters");
            return x;
        } catch (const std::exception&) {
            fail(key, "not a number: '" + *v + "'");
        }
        return fallback;
    }

    int integer(const std::string& key, int fallback) {
        double x = number(key, static_cast<double>(fallback));
        if (x != std::floor(x)) fail(key, "not an integer");
        return static_cast<int>(x);
    }

    bool boolean(const std::string& key, bool fallback) {
        auto v = raw(key);
        if (!v) return fallback;
        if (*v == "true" || *v == "1" || *v == "yes") return true;
        if (*v == "false" || *v == "0" || *v == "no") return false;
        fail(key, "not a boolean: '" + *v + "'");
        return fallback;
    }

    std::string text(const std::string& key, const std::string& fallback) {
        auto v = raw(key);
        return v ? *v : fallback;
    }

    std::vector<double> numbers(const std::string& key) {
        auto v = raw(key);
        std::vector<double> out;
        if (!v) return out;
        std::string item;
        std::istringstream ss(*v);
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            try {
                out.push_back(std::stod(item));
            } catch (const std::exception&) {
                fail(key, "not a number list: '" + *v + "'");
            }
        }
        return out;
    }

    [[noreturn]] void fail(const std::string& key, const std::string& what) {
        auto it = text_.kv.find(key);
        std::string where = text_.origin;
        if (it != text_.kv.end()) where += ":" + std::to_string(it->second.line);
        throw std::invalid_argument(where + ": key '" + key + "': " + what);
    }

    void reject_unknown() const {
        for (const auto& [key, kv] : text_.kv) {
            if (!kv.used) {
                throw std::invalid_argument(text_.origin + ":" + std::to_string(kv.line) +
                                            ": unknown key '" + key + "'");
            }
        }
    }

    const std::map<std::string, KeyValue>& entries() const { return text_.kv; }

private:
    ParsedText text_;
};

PerturbationSpec read_perturbation(Reader& r, const std::string& prefix) {
    PerturbationSpec spec;
    std::string kind = r.text(prefix + ".kind", "none");
    if (kind == "none") {
        spec.kind = PerturbationKind::none;
    } else if (kind == "rational_bump") {
        spec.kind = PerturbationKind::rational_bump;
    } else if (kind == "compact_bump") {
        spec.kind = PerturbationKind::compact_bump;
    } else if (kind == "plateau_bump") {
        spec.kind = PerturbationKind::plateau_bump;
    } else if (kind == "tabulated") {
        spec.kind = PerturbationKind::tabulated;
    } else {
        r.fail(prefix + ".kind", "unknown perturbation kind '" + kind + "'");
    }
    spec.amplitude = r.number(prefix + ".amplitude", 0.0);
    spec.center = r.number(prefix + ".center", 0.0);
    spec.width = r.number(prefix + ".width", 1.0);
    spec.decay_order = r.number(prefix + ".order", 2.0);
    spec.inner_width = r.number(prefix + ".inner_width", 0.0);
    spec.table_path = r.text(prefix + ".table", "");
    return spec;
}

std::optional<TableDecl> read_table(Reader& r, const std::string& prefix) {
    auto path = r.raw(prefix + ".table");
    TableDecl decl;
    decl.tail_slope = r.number(prefix + ".tail_slope", 0.0);
    decl.tail_order = r.number(prefix + ".tail_order", 1.0);
    decl.tail_coeff = r.number(prefix + ".tail_coeff", 0.0);
    if (!path) return std::nullopt;
    decl.path = *path;
    return decl;
}

RunConfig build_config(Reader& r, const std::string& name) {
    RunConfig cfg;
    cfg.name = name;
    cfg.scenario = scenario_from_string(r.text("scenario", "simulate"));

    cfg.material.N1 = r.number("params.N1", 2.0);
    cfg.material.nu1 = r.number("params.nu1", 2.0);
    cfg.material.eta = r.number("params.eta", 0.1);
    cfg.material.tau = r.number("params.tau", 1.0);
    cfg.material.zeta = r.number("params.zeta", 0.0);
    cfg.material.gamma = r.number("params.gamma", 1.0);
    cfg.material.mode = constitutive_mode_from_string(
        r.text("params.relation", "stretch_linear"));
    cfg.material.validate();

    cfg.sigma0 = r.number("data.sigma0", 1.0);
    cfg.sigma1 = r.number("data.sigma1", 2.0);
    cfg.pert0 = read_perturbation(r, "data.pert0");
    cfg.pert1 = read_perturbation(r, "data.pert1");
    cfg.chi0_table = read_table(r, "data.chi0");
    cfg.chi1_table = read_table(r, "data.chi1");

    cfg.solver.rtol = r.number("solver.rtol", 1e-10);
    cfg.solver.atol = r.number("solver.atol", 1e-12);
    cfg.solver.event_margin = r.number("solver.margin", 1e-9);
    cfg.solver.guard_frac = r.number("solver.guard_frac", 1e-9);
    cfg.solver.blow_up_radius_factor = r.number("solver.blow_up_radius_factor", 1e6);
    cfg.solver.monitor_points_per_decade = r.number("solver.monitor_points_per_decade", 64.0);
    cfg.solver.monitor_span = r.number("solver.monitor_span", 0.0);
    double max_step = r.number("solver.max_step", 0.0);
    cfg.solver.max_step = max_step > 0.0 ? max_step : std::numeric_limits<double>::infinity();
    cfg.horizon = r.number("solver.horizon", 10.0);
    if (!(cfg.solver.rtol > 0.0) || !(cfg.solver.atol > 0.0)) {
        r.fail("solver.rtol", "tolerances must be positive");
    }

    cfg.audit.enabled = r.boolean("audit.enabled", true);
    cfg.audit.a = r.number("audit.a", 0.0);
    cfg.audit.b = r.number("audit.b", 0.0);
    cfg.audit.n = r.integer("audit.n", 200);
    cfg.audit.t0 = r.number("audit.t0", 0.0);
    cfg.audit.t1 = r.number("audit.t1", 0.0);

    cfg.fit.r = r.number("fit.r", 1.0);
    cfg.fit.t_min = r.number("fit.t_min", 10.0);
    cfg.fit.t_max = r.number("fit.t_max", 1000.0);
    cfg.fit.samples_per_decade = r.number("fit.samples_per_decade", 48.0);
    cfg.fit.noise_floor = r.number("fit.noise_floor", 1e-11);

    cfg.fv.ds = r.number("fv.ds", 1e-3);
    cfg.fv.S = r.number("fv.S", 5.0);
    cfg.fv.t_end = r.number("fv.t_end", 1.0);
    cfg.fv.cfl = r.number("fv.cfl", 0.45);
    cfg.fv.snapshot_times = r.numbers("fv.snapshot_times");
    cfg.fv.front_sample_dt = r.number("fv.front_sample_dt", 0.01);

    cfg.out_dir = r.text("output.dir", "");
    cfg.snapshot_times = r.numbers("output.snapshot_times");
    cfg.snapshot_points = r.integer("output.snapshot_points", 512);

    r.reject_unknown();

    for (const auto& [key, kv] : r.entries()) cfg.echo[key] = kv.value;
    std::string normalized;
    for (const auto& [key, value] : cfg.echo) normalized += key + "=" + value + "\n";
    cfg.content_hash = num::fnv1a64_hex(normalized);
    return cfg;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& name,
                            const std::vector<std::string>& overrides) {
    ParsedText parsed = parse_raw(text, name);
    for (const auto& ov : overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("override '" + ov + "' must be section.key=value");
        }
        std::string key = trim(ov.substr(0, eq));
        std::string value = trim(ov.substr(eq + 1));
        parsed.kv[key] = {value, 0, false};
    }
    Reader r(std::move(parsed));
    return build_config(r, name);
}

RunConfig parse_config_file(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string stem = path;
    auto slash = stem.find_last_of('/');
    if (slash != std::string::npos) stem = stem.substr(slash + 1);
    auto dot = stem.find_last_of('.');
    if (dot != std::string::npos) stem = stem.substr(0, dot);
    return parse_config_text(ss.str(), stem, overrides);
}

NondimensionalParams config_params(const RunConfig& cfg) { return nondimensionalize(cfg.material); }

InitialData build_initial_data(const RunConfig& cfg) {
    NondimensionalParams nd = config_params(cfg);
    if (cfg.chi0_table || cfg.chi1_table) {
        Profile chi0, chi1;
        if (cfg.chi0_table) {
            chi0 = Profile::tabulated(load_profile_table(cfg.chi0_table->path),
                                      cfg.chi0_table->tail_slope, cfg.chi0_table->tail_order,
                                      cfg.chi0_table->tail_coeff, cfg.sigma0);
        } else {
            std::vector<Bump> b0;
            if (cfg.pert0.kind != PerturbationKind::none) {
                b0.push_back(Bump::make(cfg.pert0, cfg.sigma0));
            }
            chi0 = Profile::with_integrated_bumps({nd.N1 * cfg.sigma0, nd.tau, cfg.sigma0},
                                                  std::move(b0), cfg.sigma0);
        }
        if (cfg.chi1_table) {
            chi1 = Profile::tabulated(load_profile_table(cfg.chi1_table->path),
                                      cfg.chi1_table->tail_slope, cfg.chi1_table->tail_order,
                                      cfg.chi1_table->tail_coeff, cfg.sigma0);
        } else {
            std::vector<Bump> b1;
            if (cfg.pert1.kind != PerturbationKind::none) {
                b1.push_back(Bump::make(cfg.pert1, cfg.sigma0));
            }
            chi1 = Profile::with_bumps({cfg.sigma1 * (nd.N1 - nd.tau), nd.zeta, cfg.sigma0},
                                       std::move(b1), cfg.sigma0);
        }
        return make_data_from_profiles(nd, cfg.sigma0, std::move(chi0), std::move(chi1));
    }
    return make_constant_stretch_data(nd, cfg.sigma0, cfg.sigma1, cfg.pert0, cfg.pert1);
}

}  // namespace slshock
