#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mixedvol/common.hpp"

namespace mixedvol {

struct EvalResult {
    double value = 0.0;
    Vec gradient;
    Mat hessian;  // exactly symmetric
};

enum class PotentialKind { log_sum_exp, quadratic, sum, scaled, custom };

namespace detail {
class PotentialImpl {
public:
    virtual ~PotentialImpl() = default;
    virtual EvalResult eval(const Vec& x) const = 0;
    virtual int dim() const = 0;
    virtual PotentialKind kind() const = 0;
};
}  // namespace detail

/// A smooth convex function on R^n exposing value/gradient/Hessian.
/// Value type with shared immutable implementation; cheap to copy and safe
/// to evaluate concurrently.
class Potential {
public:
    Potential() = default;
    explicit Potential(std::shared_ptr<const detail::PotentialImpl> impl) : impl_(std::move(impl)) {}

    /// Evaluate value, gradient and Hessian at x. The Hessian is
    /// symmetrized exactly before returning.
    EvalResult eval(const Vec& x) const;

    /// Hessian only (same cost here; convenience for quadrature loops).
    Mat hessian(const Vec& x) const { return eval(x).hessian; }
    Vec gradient(const Vec& x) const { return eval(x).gradient; }
    double value(const Vec& x) const { return eval(x).value; }

    int dim() const { return impl_->dim(); }
    PotentialKind kind() const { return impl_->kind(); }
    bool valid() const { return impl_ != nullptr; }

    /// 0.5 x^T Q x with Q symmetric positive definite.
    static Potential quadratic(Mat q);
    /// |x|^2 / 2.
    static Potential quadratic_identity(int n);
    /// Nonnegative combination c1*p1 + ... (all same dimension, c > 0).
    static Potential combination(std::vector<Potential> parts, std::vector<double> coeffs);
    static Potential scaled(Potential p, double c);

private:
    std::shared_ptr<const detail::PotentialImpl> impl_;
};

Potential operator+(const Potential& a, const Potential& b);
Potential operator*(double c, const Potential& p);

/// log sum_j w_j exp(p_j . x) over the rows of `points`, computed with
/// max-shift stabilization. The gradient range is the interior of the
/// convex hull of the points; requires at least n+1 affinely independent
/// points (full-dimensional hull). Default weights are all one.
Potential lse_potential(const Mat& points, const Vec& weights = Vec());

/// Same, but allows lower-dimensional point sets (the Hessian is then
/// only positive semidefinite). Needed for zonotope factors such as
/// segments; every caller opting in owns the PSD consequences.
Potential lse_potential_degenerate(const Mat& points, const Vec& weights = Vec());

}  // namespace mixedvol
