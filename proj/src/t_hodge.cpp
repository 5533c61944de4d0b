#include "mixedvol/t_hodge.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "mixedvol/parallel.hpp"
#include "mixedvol/rng.hpp"

namespace mixedvol {

namespace {

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

int triangular(int k) { return k * (k + 1) / 2; }

double form_scale(const AlternatingForm& u) { return 1.0 + u.sup_norm(); }

}  // namespace

TContext::TContext(int n, int m, OneOneForm omega, std::vector<OneOneForm> factors)
    : n_(n), m_(m), omega_(std::move(omega)), factors_(std::move(factors)) {
    if (n < 2 || n > 8) throw std::invalid_argument("TContext: supported dimensions are 2..8");
    if (m < 2 || m > n) throw std::invalid_argument("TContext: need 2 <= m <= n");
    if (static_cast<int>(factors_.size()) != n - m)
        throw std::invalid_argument("TContext: need n - m factors");
    if (omega_.n() != n) throw std::invalid_argument("TContext: omega size mismatch");
    if (!omega_.positive_definite())
        throw std::invalid_argument("TContext: omega must be positive definite");
    for (const auto& f : factors_) {
        if (f.n() != n) throw std::invalid_argument("TContext: factor size mismatch");
        if (!f.positive_definite())
            throw std::invalid_argument("TContext: factors must be positive definite");
    }

    t_form_ = AlternatingForm::scalar(n, Complex(1, 0));
    for (const auto& f : factors_) t_form_ = wedge(t_form_, f.to_form());

    omega_pow_.reserve(static_cast<std::size_t>(m) + 1);
    omega_pow_.push_back(AlternatingForm::scalar(n, Complex(1, 0)));
    const AlternatingForm om = omega_.to_form();
    for (int j = 1; j <= m; ++j) omega_pow_.push_back(wedge(omega_pow_.back(), om));

    normalizer_ = volume_coefficient_real(wedge(t_form_, omega_pow_[static_cast<std::size_t>(m)])) /
                  factorial(m);
    if (!(normalizer_ > 0.0))
        throw std::invalid_argument("TContext: omega^m/m! ^ T is not positive");

    // Solve operators u -> T ^ u ^ omega^{m-k} for every k <= m, assembled
    // over the monomial bases; square by dimension count.
    solvers_.resize(static_cast<std::size_t>(m) + 1);
    for (int k = 0; k <= m; ++k) {
        const auto& cols = basis_of_degree(n, k);
        const auto& rows = basis_of_degree(n, 2 * n - k);
        const AlternatingForm w = wedge(t_form_, omega_pow_[static_cast<std::size_t>(m - k)]);
        CMat mat(rows.size(), cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const AlternatingForm col =
                wedge(w, AlternatingForm::monomial(n, cols[c].first, cols[c].second, Complex(1, 0)));
            for (std::size_t r = 0; r < rows.size(); ++r)
                mat(static_cast<int>(r), static_cast<int>(c)) = col.coeff(rows[r].first, rows[r].second);
        }
        solvers_[static_cast<std::size_t>(k)].matrix = mat;
        solvers_[static_cast<std::size_t>(k)].qr.setThreshold(1e-11);
        solvers_[static_cast<std::size_t>(k)].qr.compute(mat);
    }
}

AlternatingForm lefschetz_L(const TContext& ctx, const AlternatingForm& u) {
    return wedge(ctx.omega_form(), u);
}

AlternatingForm hard_lefschetz_solve(const TContext& ctx, int k, const AlternatingForm& target) {
    if (k < 0 || k > ctx.m()) throw std::invalid_argument("hard_lefschetz_solve: need 0 <= k <= m");
    const int n = ctx.n();
    const auto& rows = basis_of_degree(n, 2 * n - k);
    const auto& cols = basis_of_degree(n, k);

    const double scale = form_scale(target);
    // Validate the target support: everything outside degree 2n-k must be
    // rounding noise.
    const AlternatingForm off = target - target.degree_part(2 * n - k);
    if (off.sup_norm() > 1e-9 * scale)
        throw std::invalid_argument("hard_lefschetz_solve: target has wrong degree support");

    CVec rhs(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        rhs(static_cast<int>(r)) = target.coeff(rows[r].first, rows[r].second);

    const auto& solver = ctx.solver(k);
    if (solver.qr.rank() < static_cast<Eigen::Index>(cols.size()))
        throw std::domain_error("hard_lefschetz_solve: positivity violated (singular operator)");
    const CVec x = solver.qr.solve(rhs);
    const double residual = (solver.matrix * x - rhs).cwiseAbs().maxCoeff();
    if (residual > 1e-7 * scale)
        throw std::domain_error("hard_lefschetz_solve: target outside the operator range");

    AlternatingForm u(n);
    for (std::size_t c = 0; c < cols.size(); ++c) u.at(cols[c].first, cols[c].second) = x(static_cast<int>(c));
    return u;
}

std::vector<AlternatingForm> lefschetz_decompose(const TContext& ctx, const AlternatingForm& u) {
    const int n = ctx.n();
    const int m = ctx.m();
    const double tol = 1e-13 * form_scale(u);
    const int k = u.degree(tol);
    if (k > 2 * m) throw std::invalid_argument("lefschetz_decompose: degree exceeds 2m");

    if (k > m) {
        // Reduce through the isomorphism: T^u = L^{k-m}(T^v), deg v = 2m-k.
        const AlternatingForm v = hard_lefschetz_solve(ctx, 2 * m - k, wedge(ctx.t_form(), u));
        const auto inner = lefschetz_decompose(ctx, v);
        std::vector<AlternatingForm> out(inner.size() + static_cast<std::size_t>(k - m),
                                         AlternatingForm(n));
        for (std::size_t r = 0; r < inner.size(); ++r) out[r + static_cast<std::size_t>(k - m)] = inner[r];
        return out;
    }
    if (k <= 1) return {u};

    // Constructive induction: u_hat of degree k-2 matches the top Lefschetz
    // image, u0 = u - omega ^ u_hat is primitive.
    const AlternatingForm target =
        wedge(wedge(ctx.t_form(), u), ctx.omega_power(m - k + 1));
    const AlternatingForm u_hat = hard_lefschetz_solve(ctx, k - 2, target);
    const AlternatingForm u0 = u - wedge(ctx.omega_form(), u_hat);
    const auto inner = lefschetz_decompose(ctx, u_hat);
    std::vector<AlternatingForm> out(inner.size() + 1, AlternatingForm(n));
    out[0] = u0;
    for (std::size_t r = 0; r < inner.size(); ++r) out[r + 1] = inner[r];
    return out;
}

double primitivity_residual(const TContext& ctx, const AlternatingForm& u) {
    const double tol = 1e-13 * form_scale(u);
    const int k = u.degree(tol);
    if (k > ctx.m()) return u.sup_norm();  // not a primitive-eligible degree
    const int e = ctx.m() - k + 1;
    if (e > ctx.m()) return 0.0;  // k = 0: the image exceeds top degree
    const AlternatingForm img = wedge(wedge(ctx.t_form(), u), ctx.omega_power(e));
    return img.sup_norm();
}

AlternatingForm lefschetz_star(const TContext& ctx, const AlternatingForm& u) {
    const int n = ctx.n();
    const int m = ctx.m();
    AlternatingForm out(n);
    const double tol = 1e-13 * form_scale(u);
    if (u.sup_norm() <= 0.0) return out;
    // Linear extension over total-degree components.
    for (int k = 0; k <= 2 * m; ++k) {
        const AlternatingForm comp = u.degree_part(k);
        if (comp.sup_norm() <= tol) continue;
        const auto parts = lefschetz_decompose(ctx, comp);
        for (std::size_t r = 0; r < parts.size(); ++r) {
            if (parts[r].sup_norm() <= tol) continue;
            const int kp = k - 2 * static_cast<int>(r);  // primitive degree
            const int e = m + static_cast<int>(r) - k;   // image omega exponent
            if (e < 0) {
                // Admissible strata always have e >= 0; anything here is noise.
                continue;
            }
            const double coeff =
                factorial(static_cast<int>(r)) / factorial(e) * (triangular(kp) % 2 == 0 ? 1.0 : -1.0);
            out += coeff * wedge(ctx.omega_power(e), parts[r]);
        }
    }
    return out;
}

AlternatingForm lambda_op(const TContext& ctx, const AlternatingForm& u) {
    return lefschetz_star(ctx, lefschetz_L(ctx, lefschetz_star(ctx, u)));
}

AlternatingForm hodge_star(const TContext& ctx, const AlternatingForm& u) {
    return lefschetz_star(ctx, u.weil());
}

double hodge_norm_sq(const TContext& ctx, const AlternatingForm& u) {
    const AlternatingForm starred = wedge(ctx.t_form(), hodge_star(ctx, u));
    const AlternatingForm top = wedge(u, starred.conjugated());
    const double v = volume_coefficient_real(top, 1e-7);
    return v / ctx.normalizer();
}

double t_norm_sq(const TContext& ctx, const AlternatingForm& u) {
    const double tol = 1e-13 * form_scale(u);
    const int k = u.degree(tol);
    if (k > ctx.m()) throw std::invalid_argument("t_norm_sq: degree exceeds m");
    return hodge_norm_sq(ctx, u);
}

Complex t_pairing(const TContext& ctx, const AlternatingForm& u, const AlternatingForm& v) {
    const AlternatingForm starred = wedge(ctx.t_form(), hodge_star(ctx, v));
    return volume_coefficient(wedge(u, starred.conjugated())) / ctx.normalizer();
}

CMat t_norm_gram(const TContext& ctx, int k) {
    const int n = ctx.n();
    const auto& basis = basis_of_degree(n, k);
    const std::size_t d = basis.size();
    // Precompute conj(*(T ^ e_j)) once per basis element.
    std::vector<AlternatingForm> w(d);
    for (std::size_t j = 0; j < d; ++j) {
        const AlternatingForm e =
            AlternatingForm::monomial(n, basis[j].first, basis[j].second, Complex(1, 0));
        w[j] = wedge(ctx.t_form(), hodge_star(ctx, e)).conjugated();
    }
    CMat gram(d, d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t c = 0; c < d; ++c) {
            const AlternatingForm e =
                AlternatingForm::monomial(n, basis[c].first, basis[c].second, Complex(1, 0));
            gram(static_cast<int>(j), static_cast<int>(c)) =
                volume_coefficient(wedge(e, w[j])) / ctx.normalizer();
        }
    return 0.5 * (gram + CMat(gram.adjoint()));
}

CMat euclidean_twedge_gram(const TContext& ctx, int k) {
    const int n = ctx.n();
    const auto& basis = basis_of_degree(n, k);
    const std::size_t d = basis.size();
    // Coefficient tables of T ^ e_c; the Euclidean Gram of monomials is
    // diagonal with |dz^I ^ dzbar^J|^2 = 2^{|I|+|J|}.
    std::vector<AlternatingForm> te(d);
    for (std::size_t c = 0; c < d; ++c)
        te[c] = wedge(ctx.t_form(),
                      AlternatingForm::monomial(n, basis[c].first, basis[c].second, Complex(1, 0)));
    CMat gram = CMat::Zero(d, d);
    const unsigned full = (1u << n) - 1u;
    for (unsigned mi = 0; mi <= full; ++mi)
        for (unsigned mj = 0; mj <= full; ++mj) {
            const double wgt = std::pow(2.0, std::popcount(mi) + std::popcount(mj));
            for (std::size_t j = 0; j < d; ++j) {
                const Complex cj = te[j].coeff(mi, mj);
                if (cj == Complex(0, 0)) continue;
                for (std::size_t c = 0; c < d; ++c)
                    gram(static_cast<int>(j), static_cast<int>(c)) +=
                        wgt * std::conj(cj) * te[c].coeff(mi, mj);
            }
        }
    return 0.5 * (gram + CMat(gram.adjoint()));
}

GFromTheta g_from_theta(const TContext& ctx, const OneOneForm& theta) {
    const int m = ctx.m();
    const AlternatingForm tf = theta.to_form();
    const AlternatingForm num = wedge(wedge(tf, ctx.omega_power(m - 1)), ctx.t_form());
    const double vol_num = volume_coefficient_real(num, 1e-7);
    const double vol_den = ctx.normalizer() * factorial(m);  // vol(omega^m ^ T)
    GFromTheta res;
    res.g = -static_cast<double>(m) * vol_num / vol_den;

    res.theta0 = theta + ctx.omega().scaled(res.g / m);
    const double scale =
        std::max(1e-300, wedge(wedge(ctx.t_form(), tf), ctx.omega_power(m - 1)).sup_norm() +
                             ctx.normalizer());
    res.primitivity_residual =
        wedge(wedge(ctx.t_form(), res.theta0.to_form()), ctx.omega_power(m - 1)).sup_norm() / scale;

    // T ^ G = -Lambda(T ^ theta), checked at the cofactor level.
    const AlternatingForm lam = lambda_op(ctx, tf);
    const AlternatingForm g_form = AlternatingForm::scalar(ctx.n(), Complex(res.g, 0));
    res.lambda_residual = wedge(ctx.t_form(), lam + g_form).sup_norm() / scale;

    // theta' = -theta0 ^ omega^{m-2}/(m-2)! + theta1 omega^{m-1}/(m-1)!.
    const double theta1 = -res.g / m;
    res.theta_prime = Complex(-1.0 / factorial(m - 2), 0) *
                          wedge(res.theta0.to_form(), ctx.omega_power(m - 2)) +
                      Complex(theta1 / factorial(m - 1), 0) * ctx.omega_power(m - 1);

    const AlternatingForm lhs = wedge(ctx.t_form(), hodge_star(ctx, tf));
    const AlternatingForm rhs = wedge(ctx.t_form(), res.theta_prime);
    res.star_residual = (lhs - rhs).sup_norm() / std::max(1e-300, rhs.sup_norm() + lhs.sup_norm());

    res.g_t = volume_coefficient_real(wedge(wedge(tf, res.theta_prime), ctx.t_form()), 1e-7) /
              ctx.normalizer();
    return res;
}

NormComparison norm_comparison_check(int n, int m, const OneOneForm& omega,
                                     const AlternatingForm& u, double slack) {
    std::vector<OneOneForm> factors(static_cast<std::size_t>(n - m), omega);
    const TContext ctx_t(n, m, omega, factors);
    const TContext ctx_cl(n, n, omega, {});

    NormComparison res;
    res.t_norm_sq = t_norm_sq(ctx_t, u);
    const AlternatingForm tu = wedge(ctx_t.t_form(), u);
    res.twedge_norm_sq = hodge_norm_sq(ctx_cl, tu);
    res.lower_const = factorial(n) * factorial(n - m) / factorial(m);
    res.upper_const = (factorial(n) / factorial(m)) * (factorial(n) / factorial(m));
    const double scale = std::abs(res.twedge_norm_sq) + std::abs(res.t_norm_sq) + 1e-300;
    res.lower_ok = res.lower_const * res.t_norm_sq <= res.twedge_norm_sq + slack * scale;
    res.upper_ok = res.twedge_norm_sq <= res.upper_const * res.t_norm_sq + slack * scale;
    res.ratio = res.t_norm_sq > 0.0 ? res.twedge_norm_sq / res.t_norm_sq : 0.0;
    return res;
}

namespace {

// Largest two-sided ratio of |T^u|_hat over |u|_{T,hat} over all u of
// degree k, via the generalized eigenproblem of the two Gram matrices.
double ratio_extreme(const TContext& ctx, int k) {
    const CMat a = euclidean_twedge_gram(ctx, k);
    const CMat b = t_norm_gram(ctx, k);
    Eigen::GeneralizedSelfAdjointEigenSolver<CMat> es(a, b);
    if (es.info() != Eigen::Success)
        throw std::domain_error("uniform_comparison_probe: eigensolver failure");
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0)) throw std::domain_error("uniform_comparison_probe: nonpositive ratio");
    return std::max(std::sqrt(hi), 1.0 / std::sqrt(lo));
}

}  // namespace

ProbeResult uniform_comparison_probe(int n, int m, double c, int trials, std::uint64_t seed) {
    if (c < 1.0) throw std::invalid_argument("uniform_comparison_probe: need C >= 1");
    ProbeResult out;
    out.trials = trials;
    out.per_degree_c1.assign(static_cast<std::size_t>(m) + 1, 0.0);

    std::vector<std::vector<double>> per_trial(static_cast<std::size_t>(trials));
    const Rng base(seed);
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t trial) {
        Rng rng = base.split(trial);
        std::vector<OneOneForm> factors;
        factors.reserve(static_cast<std::size_t>(n - m));
        for (int f = 0; f < n - m; ++f) {
            const CMat q = random_unitary(rng, n);
            Vec lam(n);
            for (int i = 0; i < n; ++i) {
                // Corner-biased sampling keeps the extreme configurations of
                // the compact parameter set represented.
                const double roll = rng.uniform01();
                if (roll < 0.25) lam(i) = 1.0 / c;
                else if (roll < 0.5) lam(i) = c;
                else lam(i) = rng.uniform(1.0 / c, c);
            }
            CMat h = q * lam.cast<Complex>().asDiagonal() * q.adjoint();
            factors.emplace_back(CMat(0.5 * (h + CMat(h.adjoint()))));
        }
        const TContext ctx(n, m, OneOneForm(Mat(Mat::Identity(n, n))), std::move(factors));
        std::vector<double> per_k(static_cast<std::size_t>(m) + 1, 0.0);
        for (int k = 0; k <= m; ++k) per_k[static_cast<std::size_t>(k)] = ratio_extreme(ctx, k);
        per_trial[trial] = std::move(per_k);
    });

    for (const auto& per_k : per_trial)
        for (std::size_t k = 0; k < per_k.size(); ++k) {
            out.per_degree_c1[k] = std::max(out.per_degree_c1[k], per_k[k]);
            out.c1 = std::max(out.c1, per_k[k]);
        }
    return out;
}

TContext random_context(Rng& rng, int n, int m, double lo, double hi) {
    std::vector<OneOneForm> factors;
    for (int f = 0; f < n - m; ++f) factors.emplace_back(random_hermitian_pd(rng, n, lo, hi));
    return TContext(n, m, OneOneForm(random_hermitian_pd(rng, n, lo, hi)), std::move(factors));
}

}  // namespace mixedvol
