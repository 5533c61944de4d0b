#pragma once

#include <span>
#include <string>
#include <vector>

#include "mixedvol/brascamp_lieb.hpp"
#include "mixedvol/convex.hpp"
#include "mixedvol/potential.hpp"

namespace mixedvol {

/// The constant C = 4 (1 + e^sqrt(3))^2 e^sqrt(3) of the complete
/// potential (about 1000.4), evaluated once from the exact expression.
double complete_potential_constant();

struct Psi1D {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// One axis of the complete potential: log(1/(1+x^2)) + C log(1+e^x),
/// with closed-form derivatives, stable for |x| up to about 1e3.
Psi1D psi_eval_1d(double x);

/// The separable complete potential on R^n (diagonal Hessian). Its
/// gradient range is contained in (-1, C+1)^n and its torus-invariant
/// Kaehler metric is complete.
Potential complete_potential(int n);
EvalResult psi_eval(int n, const Vec& x);

struct ClaimReport {
    std::string claim;
    long long checked_points = 0;
    long long violations = 0;
    double min_margin = 0.0;
    double max_margin = 0.0;
};

struct MetricReport {
    std::vector<ClaimReport> claims;
    bool pass = false;
    std::string to_json() const;
};

/// Checks psi'' >= 1/(1+x^2) - 1e-12 on a dense 1-D grid over [-50, 50]
/// (separability reduces the n-dimensional claim to one axis).
MetricReport verify_convexity_and_lower_bounds(double lo = -50.0, double hi = 50.0,
                                               double step = 1e-3);

/// Gradient components stay in (-1, C+1) on axis sweeps and log-spaced
/// far shells (radius up to 1e3).
MetricReport verify_gradient_range(int samples = 100000);

struct CompletenessReport {
    MetricReport report;
    double max_observed = 0.0;  // sup of |d log(1+|x|^2)| in the metric
};

/// Bound sum_j (2|x_j|/(1+|x|^2)) / sqrt(psi''(x_j)) <= n + 1e-9 over
/// random points with radii up to 1e3, plus the per-axis comparison
/// 1/sqrt(psi'') <= sqrt(1+x^2).
CompletenessReport verify_completeness_bound(int n, int samples = 100000,
                                             std::uint64_t seed = 20260801);

/// All claims bundled; pass iff zero violations anywhere.
MetricReport metric_certification(int n);

/// Builds the deformation family for bodies [A1, A2, A_{m+1}, ..., A_n]
/// with the hat potential psi + phi1 + phi2 + factors, and verifies
/// nodewise that every dd^c(phi_j) is dominated by the hat metric
/// (eigenvalue check at sampled nodes; failure is a construction bug and
/// throws). epsilon is the family regularization weight.
DeformationFamily theorem72_context(std::span<const ConvexBody> bodies, int m,
                                    double epsilon = 1e-3, int domination_nodes = 10000,
                                    std::uint64_t seed = 20260801);

}  // namespace mixedvol
