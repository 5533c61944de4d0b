#include "mixedvol/metric.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mixedvol/parallel.hpp"
#include "mixedvol/rng.hpp"

namespace mixedvol {

namespace {

using json = nlohmann::ordered_json;

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }
double logistic(double x) { return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x)); }

ClaimReport make_claim(const std::string& name) {
    ClaimReport c;
    c.claim = name;
    c.min_margin = 1e300;
    c.max_margin = -1e300;
    return c;
}

void record(ClaimReport& c, double margin) {
    ++c.checked_points;
    if (margin < 0.0) ++c.violations;
    c.min_margin = std::min(c.min_margin, margin);
    c.max_margin = std::max(c.max_margin, margin);
}

}  // namespace

double complete_potential_constant() {
    static const double c = [] {
        const double e = std::exp(std::sqrt(3.0));
        return 4.0 * (1.0 + e) * (1.0 + e) * e;
    }();
    return c;
}

Psi1D psi_eval_1d(double x) {
    const double c = complete_potential_constant();
    const double x2 = x * x;
    const double sig = logistic(x);
    const double sig_m = logistic(-x);  // 1 - sig without cancellation
    Psi1D r;
    r.value = -std::log1p(x2) + c * softplus(x);
    r.d1 = -2.0 * x / (1.0 + x2) + c * sig;
    r.d2 = (2.0 * x2 - 2.0) / ((1.0 + x2) * (1.0 + x2)) + c * sig * sig_m;
    return r;
}

namespace {

class CompletePotentialImpl final : public detail::PotentialImpl {
public:
    explicit CompletePotentialImpl(int n) : n_(n) {}
    EvalResult eval(const Vec& x) const override {
        EvalResult r;
        r.value = 0.0;
        r.gradient = Vec::Zero(n_);
        r.hessian = Mat::Zero(n_, n_);
        for (int j = 0; j < n_; ++j) {
            const Psi1D p = psi_eval_1d(x(j));
            r.value += p.value;
            r.gradient(j) = p.d1;
            r.hessian(j, j) = p.d2;
        }
        return r;
    }
    int dim() const override { return n_; }
    PotentialKind kind() const override { return PotentialKind::custom; }

private:
    int n_;
};

}  // namespace

Potential complete_potential(int n) {
    if (n < 1) throw std::invalid_argument("complete_potential: n >= 1");
    return Potential(std::make_shared<CompletePotentialImpl>(n));
}

EvalResult psi_eval(int n, const Vec& x) { return complete_potential(n).eval(x); }

std::string MetricReport::to_json() const {
    json j;
    j["pass"] = pass;
    j["claims"] = json::array();
    for (const auto& c : claims) {
        json cj;
        cj["claim"] = c.claim;
        cj["checked_points"] = c.checked_points;
        cj["violations"] = c.violations;
        cj["min_margin"] = c.min_margin;
        cj["max_margin"] = c.max_margin;
        j["claims"].push_back(cj);
    }
    return j.dump(2);
}

MetricReport verify_convexity_and_lower_bounds(double lo, double hi, double step) {
    MetricReport rep;
    ClaimReport convexity = make_claim("psi'' > 0 (strict convexity, per axis)");
    ClaimReport bound = make_claim("psi'' >= 1/(1+x^2) - 1e-12");
    const long long count = static_cast<long long>((hi - lo) / step) + 1;
    for (long long i = 0; i < count; ++i) {
        const double x = lo + step * static_cast<double>(i);
        const Psi1D p = psi_eval_1d(x);
        record(convexity, p.d2);
        record(bound, p.d2 - 1.0 / (1.0 + x * x) + 1e-12);
    }
    rep.claims = {convexity, bound};
    rep.pass = convexity.violations == 0 && bound.violations == 0;
    return rep;
}

MetricReport verify_gradient_range(int samples) {
    MetricReport rep;
    const double c = complete_potential_constant();
    ClaimReport low = make_claim("psi' > -1 (component lower bound)");
    ClaimReport high = make_claim("psi' < C+1 (component upper bound)");
    // Axis sweep [-100, 100] plus log-spaced far points out to 1e3.
    const int sweep = samples / 2;
    for (int i = 0; i < sweep; ++i) {
        const double x = -100.0 + 200.0 * i / (sweep - 1);
        const Psi1D p = psi_eval_1d(x);
        record(low, p.d1 + 1.0);
        record(high, c + 1.0 - p.d1);
    }
    const int far = samples - sweep;
    for (int i = 0; i < far; ++i) {
        const double r = std::pow(10.0, 2.0 + 1.0 * i / (far - 1));  // 1e2 .. 1e3
        for (double s : {-1.0, 1.0}) {
            const Psi1D p = psi_eval_1d(s * r);
            record(low, p.d1 + 1.0);
            record(high, c + 1.0 - p.d1);
        }
    }
    rep.claims = {low, high};
    rep.pass = low.violations == 0 && high.violations == 0;
    return rep;
}

CompletenessReport verify_completeness_bound(int n, int samples, std::uint64_t seed) {
    CompletenessReport out;
    ClaimReport total = make_claim("|d log(1+|x|^2)|_g <= n + 1e-9");
    ClaimReport chain = make_claim("1/sqrt(psi'') <= sqrt(1+x^2) per axis");
    Rng rng(seed);
    double max_obs = 0.0;
    for (int i = 0; i < samples; ++i) {
        // log-spaced radius, random direction
        const double r = std::pow(10.0, rng.uniform(-1.0, 3.0));
        Vec dir(n);
        for (int j = 0; j < n; ++j) dir(j) = rng.normal();
        if (dir.norm() == 0.0) dir(0) = 1.0;
        dir.normalize();
        const Vec x = r * dir;
        const double denom = 1.0 + x.squaredNorm();
        double q = 0.0;
        for (int j = 0; j < n; ++j) {
            const Psi1D p = psi_eval_1d(x(j));
            const double dx_norm = 1.0 / std::sqrt(p.d2);  // |dx^j| in the metric
            q += 2.0 * std::abs(x(j)) / denom * dx_norm;
            record(chain, std::sqrt(1.0 + x(j) * x(j)) - dx_norm);
        }
        max_obs = std::max(max_obs, q);
        record(total, static_cast<double>(n) + 1e-9 - q);
    }
    out.report.claims = {total, chain};
    out.report.pass = total.violations == 0 && chain.violations == 0;
    out.max_observed = max_obs;
    return out;
}

MetricReport metric_certification(int n) {
    MetricReport rep;
    const MetricReport a = verify_convexity_and_lower_bounds();
    const MetricReport b = verify_gradient_range();
    const CompletenessReport c = verify_completeness_bound(n);
    rep.claims = a.claims;
    rep.claims.insert(rep.claims.end(), b.claims.begin(), b.claims.end());
    rep.claims.insert(rep.claims.end(), c.report.claims.begin(), c.report.claims.end());
    rep.pass = a.pass && b.pass && c.report.pass;
    return rep;
}

DeformationFamily theorem72_context(std::span<const ConvexBody> bodies, int m, double epsilon,
                                    int domination_nodes, std::uint64_t seed) {
    if (bodies.size() < 2) throw std::invalid_argument("theorem72_context: need at least 2 bodies");
    const int n = bodies[0].dim();
    if (m < 2 || m > n) throw std::invalid_argument("theorem72_context: need 2 <= m <= n");
    if (static_cast<int>(bodies.size()) != 2 + (n - m))
        throw std::invalid_argument("theorem72_context: need bodies [A1, A2, factors...]");

    DeformationFamily fam;
    fam.m = m;
    fam.epsilon = epsilon;
    fam.phi1 = lse_potential(bodies[0].vertices());
    fam.phi2 = lse_potential(bodies[1].vertices());
    for (std::size_t i = 2; i < bodies.size(); ++i)
        fam.t_factors.push_back(lse_potential(bodies[i].vertices()));

    // Hat potential: complete potential plus every endpoint/factor; its
    // Hessian dominates each dd^c(phi_j) by construction, and its gradient
    // range is bounded, so the hat metric has finite total volume.
    std::vector<Potential> parts = {complete_potential(n), fam.phi1, fam.phi2};
    for (const auto& f : fam.t_factors) parts.push_back(f);
    fam.hat = Potential::combination(parts, std::vector<double>(parts.size(), 1.0));

    // Nodewise domination check at sampled nodes (grid + random).
    Rng rng(seed);
    std::vector<Potential> all = {fam.phi1, fam.phi2};
    for (const auto& f : fam.t_factors) all.push_back(f);
    for (int i = 0; i < domination_nodes; ++i) {
        Vec x(n);
        if (i % 2 == 0) {
            for (int j = 0; j < n; ++j) x(j) = rng.uniform(-20.0, 20.0);
        } else {
            for (int j = 0; j < n; ++j) x(j) = 6.0 * rng.normal();
        }
        const Mat hat = fam.hat->hessian(x);
        const double scale = 1.0 + hat.cwiseAbs().maxCoeff();
        for (const auto& p : all) {
            const Mat diff = hat - p.hessian(x);
            Eigen::SelfAdjointEigenSolver<Mat> es(diff);
            if (es.eigenvalues().minCoeff() < -1e-9 * scale)
                throw std::domain_error("theorem72_context: hat metric fails to dominate a factor");
        }
    }
    fam.validate();
    return fam;
}

}  // namespace mixedvol
