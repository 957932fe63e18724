#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "slshock/runner.hpp"

namespace {

namespace fs = std::filesystem;

struct CliArgs {
    std::vector<std::string> configs;
    std::string out;
    std::vector<std::string> overrides;
    unsigned jobs = 0;
};

// one run; exit code per the termination contract (0 clean, 2 event, 1 error)
int run_one(const std::string& config_path, const fs::path& out_dir,
            const std::vector<std::string>& overrides, slshock::Scenario expected) {
    try {
        slshock::RunConfig cfg = slshock::parse_config_file(config_path, overrides);
        bool ok = cfg.scenario == expected;
        if (expected == slshock::Scenario::stability_zeta0) {
            ok = cfg.scenario == slshock::Scenario::stability_zeta0 ||
                 cfg.scenario == slshock::Scenario::stability_zetapos;
        }
        if (!ok) {
            std::cerr << config_path << ": scenario '" << to_string(cfg.scenario)
                      << "' does not match this subcommand\n";
            return 1;
        }
        slshock::RunOutcome outcome = slshock::run(cfg, out_dir.string());
        std::cout << config_path << " -> " << outcome.out_dir
                  << " (exit " << outcome.exit_code << ")\n";
        return outcome.exit_code;
    } catch (const std::exception& e) {
        std::cerr << config_path << ": error: " << e.what() << "\n";
        return 1;
    }
}

int run_all(const CliArgs& args, slshock::Scenario expected) {
    std::string out_root = args.out;
    if (out_root.empty()) {
        if (const char* env = std::getenv("SLSHOCK_OUT")) out_root = env;
    }
    if (out_root.empty()) out_root = "out";

    if (args.configs.size() == 1) {
        return run_one(args.configs.front(), out_root, args.overrides, expected);
    }

    // sweep: one worker per run, per-run output subdirectories
    std::vector<int> codes(args.configs.size(), 1);
    std::atomic<std::size_t> next{0};
    unsigned jobs = args.jobs > 0 ? args.jobs
                                  : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, args.configs.size());
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= args.configs.size()) return;
                fs::path stem = fs::path(args.configs[i]).stem();
                codes[i] = run_one(args.configs[i], fs::path(out_root) / stem,
                                   args.overrides, expected);
            }
        });
    }
    for (auto& th : pool) th.join();

    int worst = 0;
    for (int c : codes) {
        if (c == 1) return 1;
        worst = std::max(worst, c);
    }
    return worst;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stretch-limited string shock-front simulator"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        slshock::Scenario scenario;
    };
    const Sub subs[] = {
        {"simulate", "track the shock front for a configured run", slshock::Scenario::simulate},
        {"oracle-compare", "track and compare against the closed-form motion",
         slshock::Scenario::oracle_compare},
        {"stability", "perturbed run with decay-rate fitting",
         slshock::Scenario::stability_zeta0},
        {"instability", "plateau perturbation driving a second saturated segment",
         slshock::Scenario::instability_demo},
        {"energy-audit", "energy/dissipation bookkeeping on a material segment",
         slshock::Scenario::energy_audit},
        {"crossvalidate", "finite-volume capture vs the tracked front",
         slshock::Scenario::crossvalidate},
    };

    CliArgs args;
    std::vector<std::pair<CLI::App*, slshock::Scenario>> handles;
    for (const auto& sub : subs) {
        CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
        cmd->add_option("--config", args.configs, "run configuration file(s)")
            ->required()
            ->check(CLI::ExistingFile);
        cmd->add_option("--out", args.out, "output directory (default $SLSHOCK_OUT or ./out)");
        cmd->add_option("--override", args.overrides, "section.key=value config override(s)");
        cmd->add_option("--jobs", args.jobs, "worker pool size for config sweeps");
        handles.emplace_back(cmd, sub.scenario);
    }

    CLI11_PARSE(app, argc, argv);

    for (const auto& [cmd, scenario] : handles) {
        if (cmd->parsed()) return run_all(args, scenario);
    }
    return 1;
}
