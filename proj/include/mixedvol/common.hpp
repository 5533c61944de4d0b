#pragma once

#include <Eigen/Dense>
#include <complex>

namespace mixedvol {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Complex = std::complex<double>;

class Rng;

/// Random Hermitian positive definite matrix with eigenvalues drawn
/// uniformly from [lo, hi], conjugated by a Haar-ish random unitary.
CMat random_hermitian_pd(Rng& rng, int n, double lo, double hi);

/// Random real symmetric positive definite matrix, eigenvalues in [lo, hi].
Mat random_spd(Rng& rng, int n, double lo, double hi);

/// Random unitary from QR of a complex Ginibre matrix with phase fix.
CMat random_unitary(Rng& rng, int n);

}  // namespace mixedvol
