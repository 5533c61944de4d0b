#pragma once

#include <cstdint>

#include "mixedvol/convex.hpp"
#include "mixedvol/potential.hpp"

namespace mixedvol {

enum class NewtonStatus { converged, max_iterations, diverged };

struct NewtonOptions {
    double grad_tol = 1e-10;
    int max_iterations = 200;
    double blowup_radius = 1e8;
    double armijo_slope = 0.25;
};

struct LegendreResult {
    double value = 0.0;   // psi*(y)
    Vec argmax;           // x with grad psi(x) = y
    NewtonStatus status = NewtonStatus::converged;
    int iterations = 0;
    double grad_norm = 0.0;  // |grad psi(x) - y| at the last iterate
};

/// Legendre transform psi*(y) = sup_x x.y - psi(x) by damped Newton on
/// x -> psi(x) - x.y from the starting point x0. For y outside the closure
/// of the gradient range the iterates blow up and the result is flagged
/// `diverged`; a stall within the iteration budget is `max_iterations`,
/// both carrying the last iterate and gradient norm.
LegendreResult legendre_transform(const Potential& psi, const Vec& y, const Vec& x0,
                                  const NewtonOptions& opts = {});

/// The Legendre dual as a Potential: value psi*(y), gradient = maximizing
/// x(y), Hessian = inverse Hessian of psi at x(y). Each evaluation runs an
/// inner Newton solve (warm-started is unnecessary at desk scale); queries
/// outside the gradient range throw std::domain_error.
Potential legendre_dual(Potential psi, const NewtonOptions& opts = {});

struct GradientMapReport {
    int samples = 0;
    double inside_fraction = 0.0;    // strict interior hits / samples
    double contained_fraction = 0.0; // closed-hull hits (1e-9 slack)
    double max_distance = 0.0;       // worst hull residual of an image
    double min_interior_margin = 0.0;
    double min_hessian_eig = 0.0;
    double max_hessian_cond = 0.0;
};

/// Samples a Gaussian-scaled lattice plus random Gaussian points, maps them
/// through grad(psi) and reports containment in `body` and local
/// invertibility of the Hessian. Never throws; failures land in the report.
GradientMapReport gradient_map_check(const Potential& psi, const ConvexBody& body, int samples,
                                     std::uint64_t seed = 20260801);

}  // namespace mixedvol
