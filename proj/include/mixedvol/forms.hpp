#pragma once

#include <cstdint>
#include <vector>

#include "mixedvol/common.hpp"

namespace mixedvol {

/// Complex alternating form at a point of C^n, stored as a dense
/// coefficient table over the canonical monomials
///   e_{I,J} = dz^I ^ dzbar^J  (I, J increasing index sets as bitmasks,
///   all dz factors before all dzbar factors).
/// Coefficients are the true complex coefficients of the form; the (i/2)
/// normalization of (1,1)-forms lives in OneOneForm::to_form and in the
/// volume functional below, not in the table.
class AlternatingForm {
public:
    AlternatingForm() = default;
    explicit AlternatingForm(int n) : n_(n), table_(std::size_t(1) << (2 * n), Complex(0, 0)) {}

    static AlternatingForm scalar(int n, Complex c) {
        AlternatingForm f(n);
        f.table_[0] = c;
        return f;
    }
    static AlternatingForm monomial(int n, unsigned mask_i, unsigned mask_j, Complex c) {
        AlternatingForm f(n);
        f.at(mask_i, mask_j) = c;
        return f;
    }

    int n() const { return n_; }
    bool valid() const { return n_ > 0; }

    Complex coeff(unsigned mask_i, unsigned mask_j) const { return table_[index(mask_i, mask_j)]; }
    Complex& at(unsigned mask_i, unsigned mask_j) { return table_[index(mask_i, mask_j)]; }

    const std::vector<Complex>& table() const { return table_; }
    std::vector<Complex>& table() { return table_; }

    AlternatingForm& operator+=(const AlternatingForm& o);
    AlternatingForm& operator-=(const AlternatingForm& o);
    AlternatingForm& operator*=(Complex c);

    double sup_norm() const;
    bool is_zero(double tol = 0.0) const { return sup_norm() <= tol; }

    /// Degree of a pure-degree form (throws if mixed); 0 for the zero form.
    int degree(double tol = 0.0) const;

    /// Component of total degree k.
    AlternatingForm degree_part(int k) const;

    /// Complex conjugate of the form (conjugates coefficients and swaps
    /// dz with dzbar, with the resulting reordering sign).
    AlternatingForm conjugated() const;

    /// Weil operator J: multiplies each (p,q) component by i^(p-q).
    AlternatingForm weil() const;

    std::size_t index(unsigned mask_i, unsigned mask_j) const {
        return (std::size_t(mask_i) << n_) | mask_j;
    }

private:
    int n_ = 0;
    std::vector<Complex> table_;
};

AlternatingForm operator+(AlternatingForm a, const AlternatingForm& b);
AlternatingForm operator-(AlternatingForm a, const AlternatingForm& b);
AlternatingForm operator*(Complex c, AlternatingForm f);
AlternatingForm operator*(double c, AlternatingForm f);

/// Graded-commutative exterior product.
AlternatingForm wedge(const AlternatingForm& a, const AlternatingForm& b);

/// a ^ b ^ c ... convenience.
AlternatingForm wedge(const AlternatingForm& a, const AlternatingForm& b, const AlternatingForm& c);

/// k-fold power f ^ ... ^ f.
AlternatingForm wedge_power(const AlternatingForm& f, int k);

/// Coefficient of the volume form dx^1^dy^1^...^dx^n^dy^n in a top-degree
/// form, i.e. coeff(e_{full,full}) * (-1)^{n(n-1)/2} (-2i)^n. Chosen so
/// that for omega with Hermitian table h, omega^n/n! has real volume
/// coefficient det h.
Complex volume_coefficient(const AlternatingForm& u);

/// Real part of volume_coefficient; throws if the imaginary part exceeds
/// rounding tolerance.
double volume_coefficient_real(const AlternatingForm& u, double tol = 1e-8);

/// All (maskI, maskJ) monomials of total degree k, lexicographic order.
const std::vector<std::pair<unsigned, unsigned>>& basis_of_degree(int n, int k);

/// A (1,1)-form by its Hermitian coefficient table h: the form is
/// (i/2) sum h_jk dz^j ^ dzbar^k, so real convex potentials contribute
/// their Hessian as h and volume coefficients come out as determinants.
struct OneOneForm {
    CMat h;

    OneOneForm() = default;
    explicit OneOneForm(CMat table);
    explicit OneOneForm(const Mat& real_table);

    int n() const { return static_cast<int>(h.rows()); }
    bool positive_definite() const;
    AlternatingForm to_form() const;

    OneOneForm operator+(const OneOneForm& o) const { return OneOneForm(CMat(h + o.h)); }
    OneOneForm operator-(const OneOneForm& o) const { return OneOneForm(CMat(h - o.h)); }
    OneOneForm scaled(double c) const { return OneOneForm(CMat(c * h)); }
};

/// Random pure-degree-k form with standard normal complex coefficients.
AlternatingForm random_form(Rng& rng, int n, int k);

}  // namespace mixedvol
