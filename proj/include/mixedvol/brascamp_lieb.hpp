#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mixedvol/potential.hpp"
#include "mixedvol/quadrature.hpp"

namespace mixedvol {

/// A two-endpoint deformation with intermediate degree m:
///   omega_t = t dd^c(phi1) + (1-t) dd^c(phi2),
///   T       = dd^c(phi_{m+1}) ^ ... ^ dd^c(phi_n),
/// carrying the density f(t) = -log int (omega_t^m / m!) ^ T. With
/// epsilon > 0 every factor Hessian is regularized to H + epsilon * Hhat,
/// where Hhat comes from the `hat` potential; Hhat/C <= H_eps <= C*Hhat
/// holds nodewise when `hat` dominates the factors (see theorem72_context).
struct DeformationFamily {
    Potential phi1;
    Potential phi2;
    std::vector<Potential> t_factors;  // n - m of them
    int m = 0;
    double epsilon = 0.0;
    std::optional<Potential> hat;  // required when epsilon > 0

    int n() const { return phi1.dim(); }
    void validate() const;

    /// Regularized Hessians at x: {H1, H2, factors...}.
    struct NodeHessians {
        Mat h1, h2;
        std::vector<Mat> factors;
        Mat theta;  // H1 - H2 (regularization cancels)
    };
    NodeHessians hessians(const Vec& x) const;
};

/// Coefficient of the volume form of (omega_t^m / m!) ^ T at (t, x):
/// (n!/m!) D(H_omega x m, factors). Positive for strictly convex data.
double density(const DeformationFamily& family, double t, const Vec& x);

/// G = - d/dt log density = -m D(theta, H_omega^{m-1}, F) / D(H_omega^m, F).
double g_value(const DeformationFamily& family, double t, const Vec& x);

/// dG/dt = -m(m-1) D(theta, theta, H_omega^{m-2}, F) / D(H_omega^m, F) + G^2
/// (for m = 2 the first mixed discriminant has no H_omega slots).
double g_t_value(const DeformationFamily& family, double t, const Vec& x);

struct FttTerms {
    double f = 0.0;       // -log Z at this t
    double e_g = 0.0;     // E_mu(G)
    double int_gt = 0.0;  // int G_t dmu
    double variance = 0.0;
    double f_tt = 0.0;    // int_gt - variance
    double mass = 0.0;    // Z (unnormalized)
    double shell_fraction = 0.0;
    bool mass_warning = false;  // outer-shell share above 1e-3
};

/// Second derivative of f by quadrature: dmu = density / int density on the
/// same grid (so discretization bias cancels to first order), then
/// f_tt = int G_t dmu - int (G - E_mu G)^2 dmu.
FttTerms f_tt_quadrature(const DeformationFamily& family, double t, const QuadratureGrid& grid);

/// Both sides of the variance estimate: lhs = int (G - E_mu G)^2 dmu,
/// rhs = int G_t dmu. The theorem asserts lhs <= rhs.
struct HormanderGap {
    double lhs = 0.0;
    double rhs = 0.0;
};
HormanderGap hormander_gap(const DeformationFamily& family, double t, const QuadratureGrid& grid);

struct ConvexityRow {
    double t = 0.0;
    double f = 0.0;
    double f_t_fd = 0.0;
    double f_tt_quad = 0.0;
    double f_tt_fd = 0.0;
    double e_g = 0.0;
    double int_gt = 0.0;
    double variance = 0.0;
    bool pass = false;
};

struct ConvexityReport {
    std::vector<ConvexityRow> rows;
    bool pass = false;
    double density_poly_residual = 0.0;  // exp(-f) vs its degree-m fit
    std::vector<std::string> warnings;

    std::string to_csv() const;
    std::string summary_json() const;
};

/// Full per-t report over `t_grid` (FD columns use a five-point stencil
/// with step `fd_step`). Verdict: f_tt >= -tol at every node with
/// tol = 1e-6 * (1 + |f_tt|).
ConvexityReport convexity_report(const DeformationFamily& family, const std::vector<double>& t_grid,
                                 const QuadratureGrid& grid, double fd_step = 0.02);

/// f_tt at fixed t for a list of epsilon values (same grid); used to check
/// that the regularization converges as epsilon -> 0.
std::vector<double> f_tt_epsilon_sweep(const DeformationFamily& family, double t,
                                       const QuadratureGrid& grid,
                                       const std::vector<double>& epsilons);

}  // namespace mixedvol
