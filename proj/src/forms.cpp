#include "mixedvol/forms.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "mixedvol/rng.hpp"

namespace mixedvol {

namespace {

int popcount(unsigned m) { return std::popcount(m); }

// Sign of merging two sorted index sets a, b (disjoint) into sorted order,
// counting inversions: elements of a strictly greater than each element
// of b must jump over it.
int merge_sign(unsigned a, unsigned b) {
    int inversions = 0;
    while (b) {
        const int bit = std::countr_zero(b);
        b &= b - 1;
        inversions += popcount(a >> (bit + 1));
    }
    return (inversions % 2 == 0) ? 1 : -1;
}

Complex i_power(int e) {
    switch (((e % 4) + 4) % 4) {
        case 0: return {1, 0};
        case 1: return {0, 1};
        case 2: return {-1, 0};
        default: return {0, -1};
    }
}

}  // namespace

AlternatingForm& AlternatingForm::operator+=(const AlternatingForm& o) {
    if (n_ != o.n_) throw std::invalid_argument("form add: dimension mismatch");
    for (std::size_t i = 0; i < table_.size(); ++i) table_[i] += o.table_[i];
    return *this;
}

AlternatingForm& AlternatingForm::operator-=(const AlternatingForm& o) {
    if (n_ != o.n_) throw std::invalid_argument("form sub: dimension mismatch");
    for (std::size_t i = 0; i < table_.size(); ++i) table_[i] -= o.table_[i];
    return *this;
}

AlternatingForm& AlternatingForm::operator*=(Complex c) {
    for (auto& v : table_) v *= c;
    return *this;
}

double AlternatingForm::sup_norm() const {
    double m = 0.0;
    for (const auto& v : table_) m = std::max(m, std::abs(v));
    return m;
}

int AlternatingForm::degree(double tol) const {
    int deg = -1;
    const unsigned full = (1u << n_) - 1u;
    for (unsigned mi = 0; mi <= full; ++mi)
        for (unsigned mj = 0; mj <= full; ++mj) {
            if (std::abs(coeff(mi, mj)) <= tol) continue;
            const int d = popcount(mi) + popcount(mj);
            if (deg < 0) deg = d;
            else if (deg != d)
                throw std::domain_error("AlternatingForm::degree: mixed-degree form");
        }
    return deg < 0 ? 0 : deg;
}

AlternatingForm AlternatingForm::degree_part(int k) const {
    AlternatingForm out(n_);
    const unsigned full = (1u << n_) - 1u;
    for (unsigned mi = 0; mi <= full; ++mi)
        for (unsigned mj = 0; mj <= full; ++mj)
            if (popcount(mi) + popcount(mj) == k) out.at(mi, mj) = coeff(mi, mj);
    return out;
}

AlternatingForm AlternatingForm::conjugated() const {
    AlternatingForm out(n_);
    const unsigned full = (1u << n_) - 1u;
    for (unsigned mi = 0; mi <= full; ++mi)
        for (unsigned mj = 0; mj <= full; ++mj) {
            const Complex c = coeff(mi, mj);
            if (c == Complex(0, 0)) continue;
            // conj(dz^I ^ dzbar^J) = dzbar^I ^ dz^J = (-1)^{|I||J|} dz^J ^ dzbar^I
            const int sign = (popcount(mi) * popcount(mj)) % 2 == 0 ? 1 : -1;
            out.at(mj, mi) += std::conj(c) * double(sign);
        }
    return out;
}

AlternatingForm AlternatingForm::weil() const {
    AlternatingForm out(n_);
    const unsigned full = (1u << n_) - 1u;
    for (unsigned mi = 0; mi <= full; ++mi)
        for (unsigned mj = 0; mj <= full; ++mj) {
            const Complex c = coeff(mi, mj);
            if (c == Complex(0, 0)) continue;
            out.at(mi, mj) = c * i_power(popcount(mi) - popcount(mj));
        }
    return out;
}

AlternatingForm operator+(AlternatingForm a, const AlternatingForm& b) { return a += b; }
AlternatingForm operator-(AlternatingForm a, const AlternatingForm& b) { return a -= b; }
AlternatingForm operator*(Complex c, AlternatingForm f) { return f *= c; }
AlternatingForm operator*(double c, AlternatingForm f) { return f *= Complex(c, 0); }

AlternatingForm wedge(const AlternatingForm& a, const AlternatingForm& b) {
    if (a.n() != b.n()) throw std::invalid_argument("wedge: dimension mismatch");
    const int n = a.n();
    const unsigned full = (1u << n) - 1u;
    AlternatingForm out(n);

    // Nonzero monomial lists keep the double loop proportional to content.
    struct Entry {
        unsigned mi, mj;
        Complex c;
    };
    std::vector<Entry> ea, eb;
    for (unsigned mi = 0; mi <= full; ++mi)
        for (unsigned mj = 0; mj <= full; ++mj) {
            if (a.coeff(mi, mj) != Complex(0, 0)) ea.push_back({mi, mj, a.coeff(mi, mj)});
            if (b.coeff(mi, mj) != Complex(0, 0)) eb.push_back({mi, mj, b.coeff(mi, mj)});
        }

    for (const auto& x : ea) {
        for (const auto& y : eb) {
            if ((x.mi & y.mi) || (x.mj & y.mj)) continue;
            // cross sign: dz^{I2} moves past dzbar^{J1}
            int sign = merge_sign(x.mi, y.mi) * merge_sign(x.mj, y.mj);
            if ((popcount(x.mj) * popcount(y.mi)) % 2 != 0) sign = -sign;
            out.at(x.mi | y.mi, x.mj | y.mj) += double(sign) * x.c * y.c;
        }
    }
    return out;
}

AlternatingForm wedge(const AlternatingForm& a, const AlternatingForm& b, const AlternatingForm& c) {
    return wedge(wedge(a, b), c);
}

AlternatingForm wedge_power(const AlternatingForm& f, int k) {
    AlternatingForm out = AlternatingForm::scalar(f.n(), Complex(1, 0));
    for (int i = 0; i < k; ++i) out = wedge(out, f);
    return out;
}

Complex volume_coefficient(const AlternatingForm& u) {
    const int n = u.n();
    const unsigned full = (1u << n) - 1u;
    const Complex top = u.coeff(full, full);
    // dz^{1..n} ^ dzbar^{1..n} = (-1)^{n(n-1)/2} (-2i)^n dx^1^dy^1^...  and
    // the volume coefficient inverts that factor.
    Complex sigma = (n * (n - 1) / 2) % 2 == 0 ? Complex(1, 0) : Complex(-1, 0);
    for (int i = 0; i < n; ++i) sigma *= Complex(0, -2);
    return top * sigma;
}

double volume_coefficient_real(const AlternatingForm& u, double tol) {
    const Complex v = volume_coefficient(u);
    if (std::abs(v.imag()) > tol * (1.0 + std::abs(v.real())))
        throw std::domain_error("volume_coefficient_real: unexpectedly complex volume");
    return v.real();
}

const std::vector<std::pair<unsigned, unsigned>>& basis_of_degree(int n, int k) {
    static std::map<std::pair<int, int>, std::vector<std::pair<unsigned, unsigned>>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({n, k});
    if (it != cache.end()) return it->second;
    std::vector<std::pair<unsigned, unsigned>> basis;
    const unsigned full = (1u << n) - 1u;
    for (unsigned mi = 0; mi <= full; ++mi)
        for (unsigned mj = 0; mj <= full; ++mj)
            if (popcount(mi) + popcount(mj) == k) basis.emplace_back(mi, mj);
    return cache.emplace(std::make_pair(n, k), std::move(basis)).first->second;
}

OneOneForm::OneOneForm(CMat table) : h(std::move(table)) {
    if (h.rows() != h.cols()) throw std::invalid_argument("OneOneForm: square table required");
    if ((h - CMat(h.adjoint())).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + h.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("OneOneForm: table not Hermitian");
    h = 0.5 * (h + CMat(h.adjoint()));  // exact Hermitian symmetry
}

OneOneForm::OneOneForm(const Mat& real_table) : OneOneForm(CMat(real_table.cast<Complex>())) {}

bool OneOneForm::positive_definite() const {
    Eigen::LLT<CMat> llt(h);
    return llt.info() == Eigen::Success;
}

AlternatingForm OneOneForm::to_form() const {
    const int nn = n();
    AlternatingForm f(nn);
    for (int j = 0; j < nn; ++j)
        for (int k = 0; k < nn; ++k)
            f.at(1u << j, 1u << k) = Complex(0, 0.5) * h(j, k);
    return f;
}

AlternatingForm random_form(Rng& rng, int n, int k) {
    AlternatingForm f(n);
    for (const auto& [mi, mj] : basis_of_degree(n, k))
        f.at(mi, mj) = Complex(rng.normal(), rng.normal());
    return f;
}

}  // namespace mixedvol
