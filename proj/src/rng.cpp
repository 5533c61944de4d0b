#include "mixedvol/rng.hpp"

#include "mixedvol/common.hpp"

namespace mixedvol {

CMat random_unitary(Rng& rng, int n) {
    CMat g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
    Eigen::HouseholderQR<CMat> qr(g);
    CMat q = qr.householderQ();
    CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix phases so the factorization is unique (diagonal of R positive).
    for (int j = 0; j < n; ++j) {
        const Complex d = r(j, j);
        const double a = std::abs(d);
        if (a > 0.0) q.col(j) *= d / a;
    }
    return q;
}

CMat random_hermitian_pd(Rng& rng, int n, double lo, double hi) {
    const CMat q = random_unitary(rng, n);
    Vec lam(n);
    for (int i = 0; i < n; ++i) lam(i) = rng.uniform(lo, hi);
    CMat h = q * lam.cast<Complex>().asDiagonal() * q.adjoint();
    return Complex(0.5, 0.0) * (h + CMat(h.adjoint()));
}

Mat random_spd(Rng& rng, int n, double lo, double hi) {
    Mat g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    Vec lam(n);
    for (int i = 0; i < n; ++i) lam(i) = rng.uniform(lo, hi);
    Mat h = q * lam.asDiagonal() * q.transpose();
    return 0.5 * (h + Mat(h.transpose()));
}

}  // namespace mixedvol
