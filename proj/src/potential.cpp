#include "mixedvol/potential.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mixedvol {

EvalResult Potential::eval(const Vec& x) const {
    if (!impl_) throw std::logic_error("Potential: empty handle");
    if (!x.allFinite()) throw std::invalid_argument("Potential::eval: non-finite point");
    EvalResult r = impl_->eval(x);
    r.hessian = 0.5 * (r.hessian + Mat(r.hessian.transpose()));
    return r;
}

namespace {

class QuadraticImpl final : public detail::PotentialImpl {
public:
    explicit QuadraticImpl(Mat q) : q_(std::move(q)) {}
    EvalResult eval(const Vec& x) const override {
        EvalResult r;
        r.gradient = q_ * x;
        r.value = 0.5 * x.dot(r.gradient);
        r.hessian = q_;
        return r;
    }
    int dim() const override { return static_cast<int>(q_.rows()); }
    PotentialKind kind() const override { return PotentialKind::quadratic; }

private:
    Mat q_;
};

class LseImpl final : public detail::PotentialImpl {
public:
    LseImpl(Mat points, Vec logw) : points_(std::move(points)), logw_(std::move(logw)) {}
    EvalResult eval(const Vec& x) const override {
        const int k = static_cast<int>(points_.rows());
        const int n = static_cast<int>(points_.cols());
        Vec a = points_ * x + logw_;
        const double m = a.maxCoeff();
        Vec s = (a.array() - m).exp();
        const double z = s.sum();
        Vec nu = s / z;
        EvalResult r;
        r.value = m + std::log(z);
        r.gradient = points_.transpose() * nu;
        r.hessian = Mat::Zero(n, n);
        for (int j = 0; j < k; ++j) {
            const Vec p = points_.row(j).transpose();
            r.hessian.noalias() += nu(j) * p * p.transpose();
        }
        r.hessian.noalias() -= r.gradient * r.gradient.transpose();
        return r;
    }
    int dim() const override { return static_cast<int>(points_.cols()); }
    PotentialKind kind() const override { return PotentialKind::log_sum_exp; }

private:
    Mat points_;
    Vec logw_;
};

class CombinationImpl final : public detail::PotentialImpl {
public:
    CombinationImpl(std::vector<Potential> parts, std::vector<double> coeffs, PotentialKind kind)
        : parts_(std::move(parts)), coeffs_(std::move(coeffs)), kind_(kind) {}
    EvalResult eval(const Vec& x) const override {
        EvalResult r;
        r.value = 0.0;
        r.gradient = Vec::Zero(x.size());
        r.hessian = Mat::Zero(x.size(), x.size());
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            EvalResult p = parts_[i].eval(x);
            r.value += coeffs_[i] * p.value;
            r.gradient += coeffs_[i] * p.gradient;
            r.hessian += coeffs_[i] * p.hessian;
        }
        return r;
    }
    int dim() const override { return parts_.front().dim(); }
    PotentialKind kind() const override { return kind_; }

private:
    std::vector<Potential> parts_;
    std::vector<double> coeffs_;
    PotentialKind kind_;
};

int lse_affine_rank(const Mat& points) {
    if (points.rows() <= 1) return 0;
    Mat centered = points.bottomRows(points.rows() - 1);
    centered.rowwise() -= points.row(0);
    Eigen::JacobiSVD<Mat> svd(centered);
    const auto& sv = svd.singularValues();
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-10 * std::max(1.0, sv(0))) ++r;
    return r;
}

Potential make_lse(const Mat& points, const Vec& weights, bool require_full_dim) {
    const int n = static_cast<int>(points.cols());
    const int k = static_cast<int>(points.rows());
    if (k == 0) throw std::invalid_argument("lse_potential: empty point set");
    Vec w = weights.size() ? weights : Vec::Ones(k);
    if (w.size() != k) throw std::invalid_argument("lse_potential: weight count mismatch");
    if ((w.array() <= 0.0).any()) throw std::invalid_argument("lse_potential: weights must be positive");
    if (require_full_dim) {
        const int rank = lse_affine_rank(points);
        if (rank < n || k < n + 1) {
            std::ostringstream msg;
            msg << "lse_potential: point set spans affine dimension " << rank << " < " << n
                << "; gradient range would be lower-dimensional";
            throw std::invalid_argument(msg.str());
        }
    }
    return Potential(std::make_shared<LseImpl>(points, Vec(w.array().log())));
}

}  // namespace

Potential Potential::quadratic(Mat q) {
    if (q.rows() != q.cols()) throw std::invalid_argument("quadratic: square matrix required");
    Mat sym = 0.5 * (q + Mat(q.transpose()));
    return Potential(std::make_shared<QuadraticImpl>(std::move(sym)));
}

Potential Potential::quadratic_identity(int n) { return quadratic(Mat::Identity(n, n)); }

Potential Potential::combination(std::vector<Potential> parts, std::vector<double> coeffs) {
    if (parts.empty() || parts.size() != coeffs.size())
        throw std::invalid_argument("combination: parts/coeffs mismatch");
    const int n = parts.front().dim();
    for (const auto& p : parts)
        if (p.dim() != n) throw std::invalid_argument("combination: dimension mismatch");
    for (double c : coeffs)
        if (!(c > 0.0)) throw std::invalid_argument("combination: coefficients must be positive");
    return Potential(std::make_shared<CombinationImpl>(std::move(parts), std::move(coeffs),
                                                       PotentialKind::sum));
}

Potential Potential::scaled(Potential p, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("scaled: coefficient must be positive");
    return Potential(std::make_shared<CombinationImpl>(std::vector<Potential>{std::move(p)},
                                                       std::vector<double>{c},
                                                       PotentialKind::scaled));
}

Potential operator+(const Potential& a, const Potential& b) {
    return Potential::combination({a, b}, {1.0, 1.0});
}

Potential operator*(double c, const Potential& p) { return Potential::scaled(p, c); }

Potential lse_potential(const Mat& points, const Vec& weights) {
    return make_lse(points, weights, true);
}

Potential lse_potential_degenerate(const Mat& points, const Vec& weights) {
    return make_lse(points, weights, false);
}

}  // namespace mixedvol
