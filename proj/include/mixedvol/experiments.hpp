#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mixedvol/convex.hpp"
#include "mixedvol/quadrature.hpp"

namespace mixedvol {

/// The shipped body corpus: named unit bodies plus seeded random polytopes
/// in dimensions 2 and 3 (ten bodies total).
std::vector<ConvexBody> shipped_bodies();

/// Shipped pair/triple cases for cross-method mixed volumes: each entry is
/// a list of n bodies in R^n.
std::vector<std::vector<ConvexBody>> shipped_mixed_volume_cases();

/// A batch experiment: subcommand, inputs, overrides. Mirrors the CLI
/// surface so scripted runs and tests share one entry point.
struct ExperimentSpec {
    std::string command;  // mixed-volume | verify-af | verify-bm | verify-kt |
                          // lefschetz | hrr-sweep | metric-cert | bl-report
    std::vector<std::string> inputs;  // body specs / config paths
    GridConfig grid;
    bool grid_set = false;  // grid explicitly configured (else per-command default)
    std::uint64_t seed = 20260801;
    double tol = 0.0;  // 0 = command default
    double epsilon = 1e-3;
    int families = 50;  // random family count (verify-af)
    int count = 400;    // sweep size (lefschetz / hrr-sweep)
    int m = 2;
    int dim = 2;  // metric-cert
    std::string out_path;        // "" = stdout only
    std::string format = "csv";  // csv | json
};

struct ExperimentResult {
    int exit_code = 0;  // 0 pass, 1 verification failure, 2 input/config error
    std::string artifact;        // deterministic CSV or JSON payload
    std::string failure_record;  // machine-readable JSON, empty on success
};

/// Run a batch experiment. Deterministic given the seed: identical specs
/// produce byte-identical artifacts. Exit code 0 iff all asserted
/// inequalities/identities pass; input errors yield code 2.
ExperimentResult run(const ExperimentSpec& spec);

/// Render rows as a human table (fixed column order, 12 significant
/// digits already applied by the caller).
std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows);

/// Printf("%.12g") formatting used for every float in artifacts.
std::string fmt_g(double v);

}  // namespace mixedvol
