#pragma once

#include <span>
#include <string>
#include <vector>

#include "mixedvol/convex.hpp"
#include "mixedvol/mixed_discriminant.hpp"
#include "mixedvol/potential.hpp"
#include "mixedvol/quadrature.hpp"

namespace mixedvol {

/// Mixed-volume convention: `derivative` is d^n |t1 A1 + ... + tn An| /
/// dt1...dtn (n! times the classical normalization); `classical` divides
/// by n!. All stored results carry the derivative convention; the helper
/// converts.
enum class MixedVolumeConvention { derivative, classical };

struct MixedVolumeResult {
    double value = 0.0;  // derivative convention
    std::string method;  // "quadrature" | "polyfit"
    double error_estimate = 0.0;
    std::string convention = "derivative (n! x classical)";

    double as(MixedVolumeConvention c, int n) const;
    std::string to_json() const;
};

/// integral of det Hess(phi) over the grid; approximates the volume of the
/// closure of the gradient range. Throws std::domain_error if a Hessian is
/// non-positive-definite beyond rounding at any node.
double ma_volume(const Potential& phi, const QuadratureGrid& grid);

/// Serial reference of ma_volume (plain accumulation); for tests/benchmarks.
double ma_volume_serial(const Potential& phi, const QuadratureGrid& grid);

/// V(A_1, ..., A_n) = integral of n! D(Hess phi_1, ..., Hess phi_n) over the
/// grid, derivative convention. Hessians may be positive semidefinite
/// (degenerate factors such as segments are allowed); indefinite beyond
/// rounding is an error. The error estimate is the outer-shell share of the
/// integral (tensor grids) or the Monte-Carlo standard error.
MixedVolumeResult mixed_volume_quadrature(std::span<const Potential> potentials,
                                          const QuadratureGrid& grid);

/// Volume polynomial p(t) = |t1 A1 + ... + tN AN| fitted over a grid of
/// positive coefficient tuples: exponents of all monomials of total degree
/// n, their coefficients, and the relative fit residual.
struct VolumePolynomial {
    int n = 0;
    std::vector<std::vector<int>> exponents;
    Vec coefficients;
    double fit_residual = 0.0;

    double eval(const Vec& t) const;
    /// Coefficient of a given monomial (exact match on exponents).
    double coefficient(const std::vector<int>& alpha) const;
};

/// Fit the volume polynomial from exact polytope volumes on the t-grid
/// (rows of t_grid are coefficient tuples; all entries positive). Empty
/// t_grid selects a default well-conditioned tensor grid. Throws on a
/// rank-deficient grid.
VolumePolynomial volume_polynomial(std::span<const ConvexBody> bodies, const Mat& t_grid = Mat());

/// Mixed volume via the polynomial fit: the coefficient of t1...tn
/// (derivative convention). Requires exactly n bodies in R^n.
MixedVolumeResult mixed_volume_polyfit(std::span<const ConvexBody> bodies, const Mat& t_grid = Mat());

/// Exact mixed volume by inclusion-exclusion over subset sums,
///   V = sum_{S nonempty} (-1)^{n-|S|} |sum_{j in S} A_j|,
/// the minimal-grid specialization of the polynomial route. Used as the
/// independent oracle and by the inequality suites.
double mixed_volume_inclusion_exclusion(std::span<const ConvexBody> bodies);

}  // namespace mixedvol
