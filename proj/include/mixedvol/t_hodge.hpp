#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/QR>

#include "mixedvol/forms.hpp"

namespace mixedvol {

/// Pointwise Kaehler data for the mixed Hodge theory on forms of the shape
/// T ^ u: a positive reference (1,1)-form omega and positive factors
/// alpha_{m+1}, ..., alpha_n with T = alpha_{m+1} ^ ... ^ alpha_n.
/// All caches (T, omega powers, solve operators for every degree k <= m)
/// are built at construction and immutable afterwards, so a context can be
/// shared across threads.
class TContext {
public:
    TContext(int n, int m, OneOneForm omega, std::vector<OneOneForm> factors);

    int n() const { return n_; }
    int m() const { return m_; }
    const OneOneForm& omega() const { return omega_; }
    const std::vector<OneOneForm>& factors() const { return factors_; }
    const AlternatingForm& t_form() const { return t_form_; }
    const AlternatingForm& omega_form() const { return omega_pow_[1]; }
    const AlternatingForm& omega_power(int j) const { return omega_pow_[static_cast<std::size_t>(j)]; }
    /// Volume coefficient of omega^m/m! ^ T (strictly positive).
    double normalizer() const { return normalizer_; }

    struct Solver {
        CMat matrix;
        Eigen::ColPivHouseholderQR<CMat> qr;
    };
    const Solver& solver(int k) const { return solvers_[static_cast<std::size_t>(k)]; }

private:
    int n_ = 0;
    int m_ = 0;
    OneOneForm omega_;
    std::vector<OneOneForm> factors_;
    AlternatingForm t_form_;
    std::vector<AlternatingForm> omega_pow_;
    double normalizer_ = 0.0;
    std::vector<Solver> solvers_;
};

/// L: u -> omega ^ u on cofactors (the context wedges with T outside).
AlternatingForm lefschetz_L(const TContext& ctx, const AlternatingForm& u);

/// Solve T ^ u ^ omega^{m-k} = target for the unique degree-k cofactor u.
/// `target` must be supported in degree 2n-k. A rank-deficient operator
/// means the context is not genuinely positive ("positivity violated").
AlternatingForm hard_lefschetz_solve(const TContext& ctx, int k, const AlternatingForm& target);

/// Primitive components u_r with T ^ u = sum_r L^r (T ^ u_r); entry r of
/// the result is u_r (zero forms where a stratum is empty). Input must be
/// of pure degree <= 2m.
std::vector<AlternatingForm> lefschetz_decompose(const TContext& ctx, const AlternatingForm& u);

/// Residual of the primitivity condition L^{m-k+1}(T ^ u) = 0.
double primitivity_residual(const TContext& ctx, const AlternatingForm& u);

/// Lefschetz star: componentwise (-1)^{[k]} L_{m-r-k}(T ^ u_r) on the
/// decomposition, [k] = k(k+1)/2, L_p = L^p/p!. An involution.
AlternatingForm lefschetz_star(const TContext& ctx, const AlternatingForm& u);

/// Lambda = *_s L *_s; lowers degree by (1,1); adjoint of L in the T-norm.
AlternatingForm lambda_op(const TContext& ctx, const AlternatingForm& u);

/// Hodge star * = *_s J (Weil operator first).
AlternatingForm hodge_star(const TContext& ctx, const AlternatingForm& u);

/// Pointwise squared T-norm of a degree-k cofactor, k <= m:
/// u ^ conj(*(T ^ u)) = |u|^2 (omega^m/m!) ^ T. Strictly positive for
/// nonzero u over a positive context.
double t_norm_sq(const TContext& ctx, const AlternatingForm& u);

/// Same formula without the degree guard; with m = n (T = 1) this is the
/// classical pointwise Hodge norm of an arbitrary-degree form.
double hodge_norm_sq(const TContext& ctx, const AlternatingForm& u);

/// Sesquilinear pairing <u, v> = vol(u ^ conj(*(T ^ v))) / normalizer
/// (linear in u, conjugate-linear in v); <u, u> = t_norm_sq(u).
Complex t_pairing(const TContext& ctx, const AlternatingForm& u, const AlternatingForm& v);

/// Gram matrix of the T-norm pairing over the degree-k monomial basis;
/// Hermitian positive definite for k <= m.
CMat t_norm_gram(const TContext& ctx, int k);

/// Gram matrix of u -> |T ^ u|^2 with respect to the Euclidean reference
/// metric (omega-hat = identity table) over the degree-k basis.
CMat euclidean_twedge_gram(const TContext& ctx, int k);

struct GFromTheta {
    double g = 0.0;              // scalar with T ^ G = -Lambda(T ^ theta)
    OneOneForm theta0;           // theta + (g/m) omega, primitive part
    AlternatingForm theta_prime; // cofactor with *(T ^ theta) = T ^ theta'
    double primitivity_residual = 0.0;
    double lambda_residual = 0.0;  // |Lambda(T^theta) + G T| / scale
    double star_residual = 0.0;    // |*(T^theta) - T^theta'| / scale
    double g_t = 0.0;              // from theta ^ theta' ^ T
};

/// Solve the scalar G from theta ^ omega^{m-1}/(m-1)! ^ T = -G omega^m/m! ^ T,
/// assemble theta0 = theta + G omega / m and theta', and report the residuals
/// of the identities they satisfy.
GFromTheta g_from_theta(const TContext& ctx, const OneOneForm& theta);

struct NormComparison {
    double t_norm_sq = 0.0;
    double twedge_norm_sq = 0.0;  // |T ^ u|^2 w.r.t. omega
    double lower_const = 0.0;     // n!(n-m)!/m!
    double upper_const = 0.0;     // (n!/m!)^2
    bool lower_ok = false;
    bool upper_ok = false;
    double ratio = 0.0;  // twedge / t-norm
};

/// With T = omega^{n-m}: check
///   n!(n-m)!/m! |u|^2_{T,omega} <= |T^u|^2_omega <= (n!/m!)^2 |u|^2_{T,omega}.
NormComparison norm_comparison_check(int n, int m, const OneOneForm& omega,
                                     const AlternatingForm& u, double slack = 1e-10);

struct ProbeResult {
    double c1 = 0.0;  // max over trials of max(ratio, 1/ratio), exact in u
    int trials = 0;
    std::vector<double> per_degree_c1;
};

/// Sample T-factors with eigenvalues in [1/C, C] (random unitary frames,
/// corner-biased eigenvalue draws), omega-hat = identity; for each sample
/// the u-extremes of |T^u|_hat / |u|_{T,hat} are computed exactly via a
/// generalized eigenproblem over every degree k <= m. Returns the largest
/// two-sided ratio seen.
ProbeResult uniform_comparison_probe(int n, int m, double c, int trials,
                                     std::uint64_t seed = 20260801);

/// Random positive context helper (eigenvalues of omega and factors drawn
/// from [lo, hi]).
TContext random_context(Rng& rng, int n, int m, double lo = 0.4, double hi = 2.5);

}  // namespace mixedvol
