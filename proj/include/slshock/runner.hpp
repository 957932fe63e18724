#ifndef SLSHOCK_RUNNER_HPP
#define SLSHOCK_RUNNER_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slshock/config.hpp"
#include "slshock/oracle.hpp"

namespace slshock {

enum class FitMode { power_in_1_plus_t, power_in_T_minus_t };

struct FitResult {
    double exponent = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double ci95 = 0.0;  // 1.96 * stderr of the exponent
    std::size_t n_points = 0;
};

/// OLS power-law fit on the log-log transform of (t, value) pairs.
/// Points at or below the noise floor are dropped; at least 20 must remain.
/// T is required (and only used) in power_in_T_minus_t mode.
FitResult fit_decay(const std::vector<std::pair<double, double>>& series, FitMode mode,
                    std::optional<double> T = std::nullopt, double noise_floor = 1e-11);

struct RunOutcome {
    int exit_code = 0;        // 0 clean, 2 event termination (1 = error, via exceptions)
    std::string summary_json; // contents of summary.json
    std::string out_dir;
};

/// Execute one configured scenario: integrate/validate/audit as requested,
/// write trajectory/state/energy CSV artifacts plus summary.json into
/// out_dir, and return the exit status per the termination contract.
RunOutcome run(const RunConfig& cfg, const std::string& out_dir);

}  // namespace slshock

#endif
