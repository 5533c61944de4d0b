#include "mixedvol/legendre.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mixedvol/rng.hpp"

namespace mixedvol {

LegendreResult legendre_transform(const Potential& psi, const Vec& y, const Vec& x0,
                                  const NewtonOptions& opts) {
    LegendreResult res;
    Vec x = x0;
    EvalResult e = psi.eval(x);
    double objective = e.value - x.dot(y);  // minimized; psi*(y) = -min
    const double blow = opts.blowup_radius * (1.0 + x0.norm());

    for (int it = 0; it < opts.max_iterations; ++it) {
        Vec grad = e.gradient - y;
        res.iterations = it;
        res.grad_norm = grad.norm();
        if (res.grad_norm < opts.grad_tol) {
            res.status = NewtonStatus::converged;
            res.argmax = x;
            res.value = -objective;
            return res;
        }
        Eigen::LLT<Mat> llt(e.hessian);
        Vec step;
        if (llt.info() == Eigen::Success) {
            step = -llt.solve(grad);
        } else {
            // Hessian numerically singular (flat direction); fall back to a
            // gradient step so the line search can still make progress.
            step = -grad;
        }
        const double slope = grad.dot(step);
        double t = 1.0;
        bool moved = false;
        while (t >= 1e-14) {
            const Vec xt = x + t * step;
            double ft = std::numeric_limits<double>::infinity();
            EvalResult et;
            bool ok = true;
            try {
                et = psi.eval(xt);
                ft = et.value - xt.dot(y);
            } catch (const std::exception&) {
                ok = false;  // outside the evaluable domain: treat as +inf
            }
            if (ok && ft <= objective + opts.armijo_slope * t * slope) {
                x = xt;
                e = et;
                objective = ft;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if (x.norm() > blow) {
            res.status = NewtonStatus::diverged;
            res.argmax = x;
            res.value = -objective;
            return res;
        }
        if (!moved) break;  // line search exhausted: report non-convergence
    }
    res.status = NewtonStatus::max_iterations;
    res.argmax = x;
    res.value = -objective;
    res.grad_norm = (psi.eval(x).gradient - y).norm();
    return res;
}

namespace {

class LegendreDualImpl final : public detail::PotentialImpl {
public:
    LegendreDualImpl(Potential inner, NewtonOptions opts)
        : inner_(std::move(inner)), opts_(opts) {}
    EvalResult eval(const Vec& y) const override {
        LegendreResult lr = legendre_transform(inner_, y, Vec::Zero(inner_.dim()), opts_);
        if (lr.status == NewtonStatus::diverged)
            throw std::domain_error("legendre_dual: point outside the gradient range");
        if (lr.status != NewtonStatus::converged)
            throw std::domain_error("legendre_dual: inner Newton did not converge");
        EvalResult r;
        r.value = lr.value;
        r.gradient = lr.argmax;
        Mat h = inner_.eval(lr.argmax).hessian;
        r.hessian = h.llt().solve(Mat::Identity(h.rows(), h.cols()));
        return r;
    }
    int dim() const override { return inner_.dim(); }
    PotentialKind kind() const override { return PotentialKind::custom; }

private:
    Potential inner_;
    NewtonOptions opts_;
};

}  // namespace

Potential legendre_dual(Potential psi, const NewtonOptions& opts) {
    return Potential(std::make_shared<LegendreDualImpl>(std::move(psi), opts));
}

GradientMapReport gradient_map_check(const Potential& psi, const ConvexBody& body, int samples,
                                     std::uint64_t seed) {
    GradientMapReport rep;
    if (samples < 1) throw std::invalid_argument("gradient_map_check: samples >= 1 required");
    const int n = psi.dim();
    Rng rng(seed);

    // Half lattice (scaled to cover a Gaussian-typical range plus tails),
    // half random normals.
    std::vector<Vec> pts;
    pts.reserve(static_cast<std::size_t>(samples));
    const int grid_count = samples / 2;
    const int per_axis = std::max(2, static_cast<int>(std::round(std::pow(double(grid_count), 1.0 / n))));
    std::vector<int> idx(n, 0);
    const double half_width = 8.0;
    while (static_cast<int>(pts.size()) < grid_count) {
        Vec x(n);
        for (int c = 0; c < n; ++c)
            x(c) = -half_width + 2.0 * half_width * idx[c] / (per_axis - 1);
        pts.push_back(x);
        int c = 0;
        while (c < n && ++idx[c] == per_axis) idx[c++] = 0;
        if (c == n) break;
    }
    while (static_cast<int>(pts.size()) < samples) {
        Vec x(n);
        for (int c = 0; c < n; ++c) x(c) = 3.0 * rng.normal();
        pts.push_back(x);
    }

    rep.samples = static_cast<int>(pts.size());
    int strict = 0, closed = 0;
    double maxdist = 0.0;
    double minmargin = std::numeric_limits<double>::infinity();
    double mineig = std::numeric_limits<double>::infinity();
    double maxcond = 0.0;
    const bool have_facets = !body.degenerate();
    for (const Vec& x : pts) {
        EvalResult e = psi.eval(x);
        const Vec g = e.gradient;
        if (body.contains(g, 1e-9)) ++closed;
        maxdist = std::max(maxdist, hull_residual(body.vertices(), g));
        if (have_facets) {
            const double margin = body.interior_margin(g);
            minmargin = std::min(minmargin, margin);
            if (margin > 0.0) ++strict;
        }
        Eigen::SelfAdjointEigenSolver<Mat> es(e.hessian);
        const double lo = es.eigenvalues().minCoeff();
        const double hi = es.eigenvalues().maxCoeff();
        mineig = std::min(mineig, lo);
        maxcond = std::max(maxcond, lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity());
    }
    rep.inside_fraction = double(strict) / rep.samples;
    rep.contained_fraction = double(closed) / rep.samples;
    rep.max_distance = maxdist;
    rep.min_interior_margin = have_facets ? minmargin : 0.0;
    rep.min_hessian_eig = mineig;
    rep.max_hessian_cond = maxcond;
    return rep;
}

}  // namespace mixedvol
