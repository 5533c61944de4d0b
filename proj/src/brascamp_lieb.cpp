#include "mixedvol/brascamp_lieb.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mixedvol/mixed_discriminant.hpp"
#include "mixedvol/parallel.hpp"

namespace mixedvol {

namespace {

using json = nlohmann::ordered_json;

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double binom(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

// Degree-m density polynomial in t at one node: rho(t) = sum_j c_j t^j with
// c_j = (n!/m!) C(m,j) D(theta x j, H2 x (m-j), factors).
void node_density_coeffs(const DeformationFamily::NodeHessians& h, int n, int m, double* coeff) {
    std::vector<Mat> slots(static_cast<std::size_t>(n));
    for (int i = 0; i < n - m; ++i) slots[static_cast<std::size_t>(m + i)] = h.factors[static_cast<std::size_t>(i)];
    const double scale = factorial(n) / factorial(m);
    for (int j = 0; j <= m; ++j) {
        for (int s = 0; s < m; ++s) slots[static_cast<std::size_t>(s)] = (s < j) ? h.theta : h.h2;
        coeff[j] = scale * binom(m, j) * mixed_discriminant(std::span<const Mat>(slots));
    }
}

double poly_eval(const double* c, int deg, double t) {
    double v = c[deg];
    for (int j = deg - 1; j >= 0; --j) v = v * t + c[j];
    return v;
}

double poly_deriv1(const double* c, int deg, double t) {
    double v = deg * c[deg];
    for (int j = deg - 1; j >= 1; --j) v = v * t + j * c[j];
    return v;
}

double poly_deriv2(const double* c, int deg, double t) {
    if (deg < 2) return 0.0;
    double v = deg * (deg - 1) * c[deg];
    for (int j = deg - 1; j >= 2; --j) v = v * t + j * (j - 1) * c[j];
    return v;
}

constexpr double kRhoFloor = 1e-280;

}  // namespace

void DeformationFamily::validate() const {
    if (!phi1.valid() || !phi2.valid()) throw std::invalid_argument("family: missing endpoint potentials");
    const int nn = phi1.dim();
    if (phi2.dim() != nn) throw std::invalid_argument("family: endpoint dimension mismatch");
    if (m < 2 || m > nn) throw std::invalid_argument("family: need 2 <= m <= n");
    if (static_cast<int>(t_factors.size()) != nn - m)
        throw std::invalid_argument("family: need n - m T-factors");
    for (const auto& p : t_factors)
        if (p.dim() != nn) throw std::invalid_argument("family: T-factor dimension mismatch");
    if (epsilon < 0.0) throw std::invalid_argument("family: epsilon must be >= 0");
    if (epsilon > 0.0 && !hat) throw std::invalid_argument("family: epsilon > 0 requires a hat potential");
}

DeformationFamily::NodeHessians DeformationFamily::hessians(const Vec& x) const {
    NodeHessians h;
    h.h1 = phi1.hessian(x);
    h.h2 = phi2.hessian(x);
    h.theta = h.h1 - h.h2;
    h.factors.reserve(t_factors.size());
    for (const auto& p : t_factors) h.factors.push_back(p.hessian(x));
    if (epsilon > 0.0) {
        const Mat hhat = epsilon * hat->hessian(x);
        h.h1 += hhat;
        h.h2 += hhat;
        for (auto& f : h.factors) f += hhat;
    }
    return h;
}

double density(const DeformationFamily& family, double t, const Vec& x) {
    family.validate();
    const int n = family.n();
    const int m = family.m;
    const auto h = family.hessians(x);
    const Mat homega = t * h.h1 + (1.0 - t) * h.h2;
    {
        Eigen::SelfAdjointEigenSolver<Mat> es(homega);
        const double scale = 1.0 + es.eigenvalues().cwiseAbs().maxCoeff();
        if (es.eigenvalues().minCoeff() < -1e-10 * scale)
            throw std::domain_error("density: indefinite interpolated Hessian");
    }
    std::vector<Mat> slots(static_cast<std::size_t>(n));
    for (int s = 0; s < m; ++s) slots[static_cast<std::size_t>(s)] = homega;
    for (int i = 0; i < n - m; ++i) slots[static_cast<std::size_t>(m + i)] = h.factors[static_cast<std::size_t>(i)];
    return factorial(n) / factorial(m) * mixed_discriminant(std::span<const Mat>(slots));
}

double g_value(const DeformationFamily& family, double t, const Vec& x) {
    family.validate();
    const int n = family.n();
    const int m = family.m;
    const auto h = family.hessians(x);
    const Mat homega = t * h.h1 + (1.0 - t) * h.h2;
    std::vector<Mat> slots(static_cast<std::size_t>(n));
    for (int i = 0; i < n - m; ++i) slots[static_cast<std::size_t>(m + i)] = h.factors[static_cast<std::size_t>(i)];
    for (int s = 0; s < m; ++s) slots[static_cast<std::size_t>(s)] = homega;
    const double denom = mixed_discriminant(std::span<const Mat>(slots));
    slots[0] = h.theta;
    const double numer = mixed_discriminant(std::span<const Mat>(slots));
    if (!(std::abs(denom) > 0.0)) throw std::domain_error("g_value: vanishing density");
    return -m * numer / denom;
}

double g_t_value(const DeformationFamily& family, double t, const Vec& x) {
    family.validate();
    const int n = family.n();
    const int m = family.m;
    const auto h = family.hessians(x);
    const Mat homega = t * h.h1 + (1.0 - t) * h.h2;
    std::vector<Mat> slots(static_cast<std::size_t>(n));
    for (int i = 0; i < n - m; ++i) slots[static_cast<std::size_t>(m + i)] = h.factors[static_cast<std::size_t>(i)];
    for (int s = 0; s < m; ++s) slots[static_cast<std::size_t>(s)] = homega;
    const double denom = mixed_discriminant(std::span<const Mat>(slots));
    if (!(std::abs(denom) > 0.0)) throw std::domain_error("g_t_value: vanishing density");
    slots[0] = h.theta;
    const double g = -m * mixed_discriminant(std::span<const Mat>(slots)) / denom;
    slots[1] = h.theta;  // only reached for m >= 2
    const double dtheta2 = mixed_discriminant(std::span<const Mat>(slots));
    return -double(m) * (m - 1) * dtheta2 / denom + g * g;
}

FttTerms f_tt_quadrature(const DeformationFamily& family, double t, const QuadratureGrid& grid) {
    family.validate();
    const int n = family.n();
    const int m = family.m;
    if (grid.dim() != n) throw std::invalid_argument("f_tt_quadrature: grid dimension mismatch");

    // Fused accumulation: [Z, G Z, G^2 Z, G_t Z, shell |Z|].
    const auto acc = reduce_sum_vec(grid.size(), 5, [&](std::size_t i, double* out) {
        const QuadNode nd = grid.node(i);
        const auto h = family.hessians(nd.x);
        double c[8];
        node_density_coeffs(h, n, m, c);
        const double rho = poly_eval(c, m, t);
        if (!(rho > kRhoFloor)) return;
        const double rho1 = poly_deriv1(c, m, t);
        const double rho2 = poly_deriv2(c, m, t);
        const double g = -rho1 / rho;
        const double gt = -rho2 / rho + g * g;
        out[0] += rho * nd.weight;
        out[1] += g * rho * nd.weight;
        out[2] += g * g * rho * nd.weight;
        out[3] += gt * rho * nd.weight;
        if (nd.outer_shell) out[4] += std::abs(rho) * nd.weight;
    });

    const double z = acc[0];
    if (!(z > 0.0)) throw std::domain_error("f_tt_quadrature: nonpositive density mass");
    FttTerms terms;
    terms.mass = z;
    terms.f = -std::log(z);
    terms.e_g = acc[1] / z;
    terms.int_gt = acc[3] / z;
    terms.variance = acc[2] / z - terms.e_g * terms.e_g;
    terms.f_tt = terms.int_gt - terms.variance;
    terms.shell_fraction = acc[4] / z;
    terms.mass_warning = terms.shell_fraction > 1e-3;
    return terms;
}

HormanderGap hormander_gap(const DeformationFamily& family, double t, const QuadratureGrid& grid) {
    const FttTerms terms = f_tt_quadrature(family, t, grid);
    return HormanderGap{terms.variance, terms.int_gt};
}

ConvexityReport convexity_report(const DeformationFamily& family, const std::vector<double>& t_grid,
                                 const QuadratureGrid& grid, double fd_step) {
    family.validate();
    const int n = family.n();
    const int m = family.m;
    if (grid.dim() != n) throw std::invalid_argument("convexity_report: grid dimension mismatch");
    if (t_grid.empty()) throw std::invalid_argument("convexity_report: empty t grid");

    const int nt = static_cast<int>(t_grid.size());
    // Layout: [cbar_0..cbar_m | shell_0..shell_m | A(t_0)..A(t_{nt-1})]
    const std::size_t dim = static_cast<std::size_t>(2 * (m + 1) + nt);
    const auto acc = reduce_sum_vec(grid.size(), dim, [&](std::size_t i, double* out) {
        const QuadNode nd = grid.node(i);
        const auto h = family.hessians(nd.x);
        double c[8];
        node_density_coeffs(h, n, m, c);
        for (int j = 0; j <= m; ++j) {
            out[j] += c[j] * nd.weight;
            if (nd.outer_shell) out[m + 1 + j] += std::abs(c[j]) * nd.weight;
        }
        for (int k = 0; k < nt; ++k) {
            const double rho = poly_eval(c, m, t_grid[static_cast<std::size_t>(k)]);
            if (!(rho > kRhoFloor)) continue;
            const double rho1 = poly_deriv1(c, m, t_grid[static_cast<std::size_t>(k)]);
            out[2 * (m + 1) + k] += rho1 * rho1 / rho * nd.weight;
        }
    });

    const double* cbar = acc.data();
    const double* shell = acc.data() + (m + 1);
    const double* avals = acc.data() + 2 * (m + 1);

    auto f_of = [&](double t) {
        const double p = poly_eval(cbar, m, t);
        if (!(p > 0.0)) throw std::domain_error("convexity_report: nonpositive mass at t");
        return -std::log(p);
    };

    ConvexityReport rep;
    rep.pass = true;
    const double h = fd_step;
    for (int k = 0; k < nt; ++k) {
        const double t = t_grid[static_cast<std::size_t>(k)];
        const double p = poly_eval(cbar, m, t);
        if (!(p > 0.0)) throw std::domain_error("convexity_report: nonpositive mass at t");
        const double p1 = poly_deriv1(cbar, m, t);
        const double p2 = poly_deriv2(cbar, m, t);
        ConvexityRow row;
        row.t = t;
        row.f = -std::log(p);
        row.e_g = -p1 / p;
        const double a = avals[k];
        row.int_gt = (-p2 + a) / p;
        row.variance = a / p - (p1 / p) * (p1 / p);
        row.f_tt_quad = row.int_gt - row.variance;
        row.f_t_fd = (f_of(t + h) - f_of(t - h)) / (2.0 * h);
        row.f_tt_fd = (-f_of(t + 2 * h) + 16 * f_of(t + h) - 30 * row.f + 16 * f_of(t - h) -
                       f_of(t - 2 * h)) /
                      (12.0 * h * h);
        row.pass = row.f_tt_quad >= -1e-6 * (1.0 + std::abs(row.f_tt_quad));
        if (!row.pass) rep.pass = false;

        double shell_mass = 0.0;
        for (int j = 0; j <= m; ++j) shell_mass += shell[j] * std::pow(t, j);
        if (shell_mass > 1e-3 * p) {
            std::ostringstream w;
            w << "grid mass deficit at t=" << t << ": outer-shell share " << shell_mass / p;
            rep.warnings.push_back(w.str());
        }
        rep.rows.push_back(row);
    }

    // Cross-check of the per-node coefficient decomposition against direct
    // density integration at a few t values.
    double worst = 0.0;
    for (double t : {0.25, 0.5, 0.75}) {
        const double direct = grid.integrate([&](const Vec& x) { return density(family, t, x); });
        const double viacoeff = poly_eval(cbar, m, t);
        worst = std::max(worst, std::abs(direct - viacoeff) / std::max(1e-300, std::abs(viacoeff)));
    }
    rep.density_poly_residual = worst;
    return rep;
}

std::vector<double> f_tt_epsilon_sweep(const DeformationFamily& family, double t,
                                       const QuadratureGrid& grid,
                                       const std::vector<double>& epsilons) {
    std::vector<double> out;
    out.reserve(epsilons.size());
    for (double eps : epsilons) {
        DeformationFamily fam = family;
        fam.epsilon = eps;
        out.push_back(f_tt_quadrature(fam, t, grid).f_tt);
    }
    return out;
}

std::string ConvexityReport::to_csv() const {
    std::ostringstream os;
    os.precision(12);
    os << "t,f,f_t_fd,f_tt_quad,f_tt_fd,E_G,int_Gt,variance,verdict\n";
    for (const auto& r : rows) {
        os << r.t << ',' << r.f << ',' << r.f_t_fd << ',' << r.f_tt_quad << ',' << r.f_tt_fd << ','
           << r.e_g << ',' << r.int_gt << ',' << r.variance << ',' << (r.pass ? "PASS" : "FAIL")
           << '\n';
    }
    return os.str();
}

std::string ConvexityReport::summary_json() const {
    json j;
    j["pass"] = pass;
    j["t_count"] = rows.size();
    double min_ftt = rows.empty() ? 0.0 : rows.front().f_tt_quad;
    double max_fd_rel = 0.0;
    for (const auto& r : rows) {
        min_ftt = std::min(min_ftt, r.f_tt_quad);
        const double denom = std::max(std::abs(r.f_tt_quad), 1e-12);
        max_fd_rel = std::max(max_fd_rel, std::abs(r.f_tt_quad - r.f_tt_fd) / denom);
    }
    j["min_f_tt"] = min_ftt;
    j["max_fd_mismatch_rel"] = max_fd_rel;
    j["density_poly_residual"] = density_poly_residual;
    j["warnings"] = warnings;
    return j.dump(2);
}

}  // namespace mixedvol
