#include "mixedvol/monge_ampere.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mixedvol/parallel.hpp"

namespace mixedvol {

namespace {

using json = nlohmann::ordered_json;

// Determinant of a symmetric matrix expected to be positive semidefinite.
// Rounding-level negative eigenvalues are clamped; anything indefinite
// beyond that is reported via the flag.
double psd_det(const Mat& h, bool* indefinite) {
    Eigen::LLT<Mat> llt(h);
    if (llt.info() == Eigen::Success) {
        double d = 1.0;
        const auto& l = llt.matrixLLT();
        for (int i = 0; i < h.rows(); ++i) d *= l(i, i);
        return d * d;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    const double scale = 1.0 + es.eigenvalues().cwiseAbs().maxCoeff();
    double det = 1.0;
    for (int i = 0; i < h.rows(); ++i) {
        const double lam = es.eigenvalues()(i);
        if (lam < -1e-10 * scale) {
            *indefinite = true;
            return 0.0;
        }
        det *= std::max(lam, 0.0);
    }
    return det;
}

void require_psd_list(std::vector<Mat>& hs, const Vec& x) {
    for (auto& h : hs) {
        bool indef = false;
        Eigen::SelfAdjointEigenSolver<Mat> es(h);
        const double scale = 1.0 + es.eigenvalues().cwiseAbs().maxCoeff();
        if (es.eigenvalues().minCoeff() < -1e-10 * scale) indef = true;
        if (indef) {
            throw std::domain_error("mixed_volume_quadrature: indefinite Hessian at node |x|=" +
                                    std::to_string(x.norm()));
        }
    }
}

}  // namespace

double MixedVolumeResult::as(MixedVolumeConvention c, int n) const {
    if (c == MixedVolumeConvention::derivative) return value;
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return value / f;
}

std::string MixedVolumeResult::to_json() const {
    json j;
    j["value"] = value;
    j["method"] = method;
    j["error_estimate"] = error_estimate;
    j["convention"] = convention;
    return j.dump();
}

double ma_volume(const Potential& phi, const QuadratureGrid& grid) {
    if (phi.dim() != grid.dim()) throw std::invalid_argument("ma_volume: dimension mismatch");
    bool indefinite = false;
    const double v = reduce_sum(grid.size(), [&](std::size_t i) {
        const QuadNode nd = grid.node(i);
        bool bad = false;
        const double d = psd_det(phi.hessian(nd.x), &bad);
        if (bad) {
#pragma omp atomic write
            indefinite = true;
            return 0.0;
        }
        return d * nd.weight;
    });
    if (indefinite)
        throw std::domain_error("ma_volume: non-positive-definite Hessian at a quadrature node");
    return v;
}

double ma_volume_serial(const Potential& phi, const QuadratureGrid& grid) {
    if (phi.dim() != grid.dim()) throw std::invalid_argument("ma_volume: dimension mismatch");
    return reduce_sum_serial(grid.size(), [&](std::size_t i) {
        const QuadNode nd = grid.node(i);
        bool bad = false;
        const double d = psd_det(phi.hessian(nd.x), &bad);
        if (bad) throw std::domain_error("ma_volume: non-positive-definite Hessian at a node");
        return d * nd.weight;
    });
}

MixedVolumeResult mixed_volume_quadrature(std::span<const Potential> potentials,
                                          const QuadratureGrid& grid) {
    const int n = grid.dim();
    if (static_cast<int>(potentials.size()) != n)
        throw std::invalid_argument("mixed_volume_quadrature: need n potentials in R^n");
    for (const auto& p : potentials)
        if (p.dim() != n) throw std::invalid_argument("mixed_volume_quadrature: dimension mismatch");
    double nfact = 1.0;
    for (int i = 2; i <= n; ++i) nfact *= i;

    // One fused pass accumulating [integral, outer-shell integral,
    // sum of squares] for the error estimates.
    const auto acc = reduce_sum_vec(grid.size(), 3, [&](std::size_t i, double* out) {
        const QuadNode nd = grid.node(i);
        std::vector<Mat> hs(potentials.size());
        for (std::size_t k = 0; k < potentials.size(); ++k) hs[k] = potentials[k].hessian(nd.x);
        require_psd_list(hs, nd.x);
        const double d = nfact * mixed_discriminant(std::span<const Mat>(hs));
        const double c = d * nd.weight;
        out[0] += c;
        if (nd.outer_shell) out[1] += std::abs(c);
        out[2] += c * c;
    });

    MixedVolumeResult res;
    res.value = acc[0];
    res.method = "quadrature";
    if (grid.mode() == GridMode::tensor) {
        res.error_estimate = acc[1];
    } else {
        const double nsamp = static_cast<double>(grid.size());
        const double mean = acc[0] / nsamp;
        const double var = std::max(0.0, acc[2] / nsamp - mean * mean);
        res.error_estimate = std::sqrt(var * nsamp);  // standard error of the sum
    }
    return res;
}

// ---------------------------------------------------------------------------
// Polynomial route
// ---------------------------------------------------------------------------

namespace {

void enumerate_monomials(int nvars, int degree, std::vector<int>& cur,
                         std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == nvars - 1) {
        cur.push_back(degree);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int d = degree; d >= 0; --d) {
        cur.push_back(d);
        enumerate_monomials(nvars, degree - d, cur, out);
        cur.pop_back();
    }
}

Mat default_t_grid(int nvars, int monomials) {
    int g = 2;
    while (std::pow(double(g), nvars) < 2.0 * monomials) ++g;
    const int total = static_cast<int>(std::pow(double(g), nvars));
    Mat grid(total, nvars);
    for (int i = 0; i < total; ++i) {
        int rest = i;
        for (int c = 0; c < nvars; ++c) {
            grid(i, c) = 0.5 * (1 + rest % g);
            rest /= g;
        }
    }
    return grid;
}

}  // namespace

double VolumePolynomial::eval(const Vec& t) const {
    double s = 0.0;
    for (std::size_t k = 0; k < exponents.size(); ++k) {
        double m = coefficients(static_cast<int>(k));
        for (std::size_t c = 0; c < exponents[k].size(); ++c)
            for (int e = 0; e < exponents[k][c]; ++e) m *= t(static_cast<int>(c));
        s += m;
    }
    return s;
}

double VolumePolynomial::coefficient(const std::vector<int>& alpha) const {
    for (std::size_t k = 0; k < exponents.size(); ++k)
        if (exponents[k] == alpha) return coefficients(static_cast<int>(k));
    throw std::invalid_argument("VolumePolynomial::coefficient: monomial not present");
}

VolumePolynomial volume_polynomial(std::span<const ConvexBody> bodies, const Mat& t_grid) {
    if (bodies.empty()) throw std::invalid_argument("volume_polynomial: no bodies");
    const int n = bodies[0].dim();
    const int nb = static_cast<int>(bodies.size());

    VolumePolynomial poly;
    poly.n = n;
    std::vector<int> cur;
    enumerate_monomials(nb, n, cur, poly.exponents);
    const int nm = static_cast<int>(poly.exponents.size());

    Mat grid = t_grid.size() ? t_grid : default_t_grid(nb, nm);
    if (grid.cols() != nb) throw std::invalid_argument("volume_polynomial: t-grid width mismatch");
    if (grid.rows() < nm)
        throw std::invalid_argument("volume_polynomial: not enough t-samples for the monomials");
    if ((grid.array() <= 0.0).any())
        throw std::invalid_argument("volume_polynomial: t-grid entries must be positive");

    // Exact volumes of the scaled sums at every grid point (independent
    // hull computations; parallel across rows).
    Vec vols(grid.rows());
    std::vector<std::string> errors(static_cast<std::size_t>(grid.rows()));
    parallel_for(static_cast<std::size_t>(grid.rows()), [&](std::size_t r) {
        try {
            std::vector<double> coeffs(nb);
            for (int c = 0; c < nb; ++c) coeffs[static_cast<std::size_t>(c)] = grid(static_cast<int>(r), c);
            const ConvexBody sum = minkowski_sum(bodies, coeffs);
            vols(static_cast<int>(r)) = polytope_volume_exact(sum);
        } catch (const std::exception& e) {
            errors[r] = e.what();
        }
    });
    for (const auto& e : errors)
        if (!e.empty()) throw std::runtime_error("volume_polynomial: " + e);

    Mat vander(grid.rows(), nm);
    for (int r = 0; r < grid.rows(); ++r)
        for (int k = 0; k < nm; ++k) {
            double m = 1.0;
            for (int c = 0; c < nb; ++c)
                for (int e = 0; e < poly.exponents[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)]; ++e)
                    m *= grid(r, c);
            vander(r, k) = m;
        }

    Eigen::ColPivHouseholderQR<Mat> qr(vander);
    if (qr.rank() < nm)
        throw std::invalid_argument("volume_polynomial: rank-deficient t-grid (Vandermonde singular)");
    poly.coefficients = qr.solve(vols);
    const double scale = std::max(1.0, vols.cwiseAbs().maxCoeff());
    poly.fit_residual = (vander * poly.coefficients - vols).cwiseAbs().maxCoeff() / scale;
    return poly;
}

MixedVolumeResult mixed_volume_polyfit(std::span<const ConvexBody> bodies, const Mat& t_grid) {
    const int n = bodies.empty() ? 0 : bodies[0].dim();
    if (static_cast<int>(bodies.size()) != n)
        throw std::invalid_argument("mixed_volume_polyfit: need exactly n bodies in R^n");
    const VolumePolynomial poly = volume_polynomial(bodies, t_grid);
    MixedVolumeResult res;
    res.value = poly.coefficient(std::vector<int>(static_cast<std::size_t>(n), 1));
    res.method = "polyfit";
    res.error_estimate = poly.fit_residual;
    return res;
}

double mixed_volume_inclusion_exclusion(std::span<const ConvexBody> bodies) {
    const int n = bodies.empty() ? 0 : bodies[0].dim();
    if (static_cast<int>(bodies.size()) != n)
        throw std::invalid_argument("mixed_volume_inclusion_exclusion: need n bodies in R^n");
    double v = 0.0;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<ConvexBody> subset;
        std::vector<double> coeffs;
        for (int j = 0; j < n; ++j) {
            if (mask & (1u << j)) {
                subset.push_back(bodies[static_cast<std::size_t>(j)]);
                coeffs.push_back(1.0);
            }
        }
        const ConvexBody sum = minkowski_sum(std::span<const ConvexBody>(subset),
                                             std::span<const double>(coeffs));
        const double vol = polytope_volume_exact(sum);
        const int bits = __builtin_popcount(mask);
        v += (((n - bits) % 2 == 0) ? 1.0 : -1.0) * vol;
    }
    return v;
}

}  // namespace mixedvol
