// Batch front end: body/family ingestion, experiment orchestration and
// regression suites. Exit codes: 0 all checks pass, 1 verification failure
// (machine-readable record on stderr), 2 input/config error.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mixedvol/experiments.hpp"

namespace {

void add_common(CLI::App* cmd, mixedvol::ExperimentSpec& spec, std::string& grid_mode,
                bool& radius_set, bool& nodes_set, bool& samples_set, bool& mode_set) {
    cmd->add_option("inputs", spec.inputs, "body specs (paths or names like cube3) / config files");
    cmd->add_option("--grid", grid_mode, "quadrature mode: tensor|mc")->check(CLI::IsMember({"tensor", "mc"}))
        ->each([&](const std::string&) { mode_set = true; });
    cmd->add_option("--radius", spec.grid.radius, "truncation radius R")
        ->each([&](const std::string&) { radius_set = true; });
    cmd->add_option("--nodes", spec.grid.nodes_per_axis, "tensor nodes per axis")
        ->each([&](const std::string&) { nodes_set = true; });
    cmd->add_option("--samples", spec.grid.samples, "Monte-Carlo samples")
        ->each([&](const std::string&) { samples_set = true; });
    cmd->add_option("--seed", spec.seed, "experiment seed");
    cmd->add_option("--tol", spec.tol, "tolerance override");
    cmd->add_option("--epsilon", spec.epsilon, "regularization weight");
    cmd->add_option("--families", spec.families, "random family count");
    cmd->add_option("--count", spec.count, "sweep trial count");
    cmd->add_option("-m,--m", spec.m, "intermediate degree m");
    cmd->add_option("-n,--dim", spec.dim, "ambient dimension");
    cmd->add_option("--out", spec.out_path, "artifact output path");
    cmd->add_option("--format", spec.format, "artifact format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mixed volumes, convexity verification and pointwise Hodge checks"};
    app.require_subcommand(1);
    app.set_config("--config", "", "config file (flags override file values)");

    mixedvol::ExperimentSpec spec;
    std::string grid_mode = "tensor";
    bool radius_set = false, nodes_set = false, samples_set = false, mode_set = false;

    const std::vector<std::string> commands = {"mixed-volume", "verify-af", "verify-bm",
                                               "verify-kt",   "lefschetz", "hrr-sweep",
                                               "metric-cert", "bl-report"};
    for (const auto& name : commands) {
        CLI::App* cmd = app.add_subcommand(name);
        add_common(cmd, spec, grid_mode, radius_set, nodes_set, samples_set, mode_set);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }

    spec.command = app.get_subcommands().front()->get_name();
    spec.grid.mode = grid_mode == "mc" ? mixedvol::GridMode::monte_carlo : mixedvol::GridMode::tensor;
    spec.grid.seed = spec.seed;
    spec.grid_set = radius_set || nodes_set || samples_set || mode_set;

    const mixedvol::ExperimentResult result = mixedvol::run(spec);

    if (!spec.out_path.empty()) {
        std::ofstream out(spec.out_path, std::ios::binary);
        if (!out) {
            std::cerr << "{\"error\":\"cannot open output path\"}\n";
            return 2;
        }
        out << result.artifact;
    } else {
        std::cout << result.artifact;
    }
    if (!result.failure_record.empty()) std::cerr << result.failure_record;
    return result.exit_code;
}
