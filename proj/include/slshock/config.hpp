#ifndef SLSHOCK_CONFIG_HPP
#define SLSHOCK_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slshock/front_tracker.hpp"
#include "slshock/fv.hpp"

namespace slshock {

enum class Scenario {
    simulate,
    oracle_compare,
    stability_zeta0,
    stability_zetapos,
    instability_demo,
    energy_audit,
    crossvalidate,
};

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

/// Declaration of a tabulated profile in the [data] section.
struct TableDecl {
    std::string path;
    double tail_slope = 0.0;
    double tail_order = 1.0;
    double tail_coeff = 0.0;
};

struct AuditConfig {
    bool enabled = true;
    double a = 0.0;   // 0 = auto (sigma0 / 2)
    double b = 0.0;   // 0 = auto (front at the last grid time + safety)
    int n = 200;
    double t0 = 0.0;  // 0 = auto
    double t1 = 0.0;  // 0 = auto
};

struct FitConfig {
    double r = 1.0;
    double t_min = 10.0;
    double t_max = 1000.0;
    double samples_per_decade = 48.0;
    double noise_floor = 1e-11;
};

/// Parsed run configuration; sectioned key=value text format.
struct RunConfig {
    Scenario scenario = Scenario::simulate;
    MaterialParams material;
    double sigma0 = 1.0;
    double sigma1 = 2.0;
    PerturbationSpec pert0;
    PerturbationSpec pert1;
    std::optional<TableDecl> chi0_table;
    std::optional<TableDecl> chi1_table;

    TrackerOptions solver;
    double horizon = 10.0;

    AuditConfig audit;
    FitConfig fit;
    FvOptions fv;

    std::string out_dir;
    std::vector<double> snapshot_times;
    int snapshot_points = 512;

    std::string name;                       // config stem, used for sweep subdirs
    std::map<std::string, std::string> echo;  // normalized key -> value
    std::string content_hash;
};

/// Parse a config file; `overrides` are section.key=value pairs applied on
/// top. Errors carry file:line diagnostics.
RunConfig parse_config_file(const std::string& path,
                            const std::vector<std::string>& overrides = {});
RunConfig parse_config_text(const std::string& text, const std::string& name,
                            const std::vector<std::string>& overrides = {});

/// Nondimensionalized material block of the config.
NondimensionalParams config_params(const RunConfig& cfg);

/// Build the initial data declared by the [data] block.
InitialData build_initial_data(const RunConfig& cfg);

}  // namespace slshock

#endif
