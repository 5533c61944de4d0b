#pragma once

#include <span>

#include "mixedvol/common.hpp"

namespace mixedvol {

/// Normalized mixed discriminant D(H_1, ..., H_n) of n symmetric (or
/// Hermitian) n x n matrices: the full polarization of the determinant,
/// D(H, ..., H) = det H. Computed by inclusion-exclusion over subsets,
///   D = (1/n!) sum_{S subset of [n]} (-1)^{n-|S|} det(sum_{j in S} H_j),
/// i.e. 2^n determinant evaluations; intended for n <= 6.
double mixed_discriminant(std::span<const Mat> matrices);

/// Hermitian variant; the value is real (the imaginary part, a roundoff
/// artifact, is discarded after a magnitude check).
double mixed_discriminant(std::span<const CMat> matrices);

/// Convenience: D with multiplicities, repeats[i] copies of matrices[i].
double mixed_discriminant_rep(std::span<const Mat> matrices, std::span<const int> repeats);

}  // namespace mixedvol
