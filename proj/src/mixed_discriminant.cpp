#include "mixedvol/mixed_discriminant.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace mixedvol {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

template <class M>
void check_sizes(std::span<const M> matrices) {
    const int n = static_cast<int>(matrices.size());
    if (n == 0) throw std::invalid_argument("mixed_discriminant: empty argument list");
    for (const auto& h : matrices)
        if (h.rows() != n || h.cols() != n)
            throw std::invalid_argument("mixed_discriminant: need n matrices of size n x n");
}

}  // namespace

double mixed_discriminant(std::span<const Mat> matrices) {
    check_sizes(matrices);
    const int n = static_cast<int>(matrices.size());
    double acc = 0.0;
    Mat sum(n, n);
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        sum.setZero();
        for (int j = 0; j < n; ++j)
            if (mask & (1u << j)) sum += matrices[j];
        const int bits = __builtin_popcount(mask);
        const double sign = ((n - bits) % 2 == 0) ? 1.0 : -1.0;
        acc += sign * sum.determinant();
    }
    return acc / factorial(n);
}

double mixed_discriminant(std::span<const CMat> matrices) {
    check_sizes(matrices);
    const int n = static_cast<int>(matrices.size());
    Complex acc(0.0, 0.0);
    CMat sum(n, n);
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        sum.setZero();
        for (int j = 0; j < n; ++j)
            if (mask & (1u << j)) sum += matrices[j];
        const int bits = __builtin_popcount(mask);
        const double sign = ((n - bits) % 2 == 0) ? 1.0 : -1.0;
        acc += sign * sum.determinant();
    }
    acc /= factorial(n);
    if (std::abs(acc.imag()) > 1e-8 * (1.0 + std::abs(acc.real())))
        throw std::domain_error("mixed_discriminant: non-Hermitian input (imaginary part)");
    return acc.real();
}

double mixed_discriminant_rep(std::span<const Mat> matrices, std::span<const int> repeats) {
    if (matrices.size() != repeats.size())
        throw std::invalid_argument("mixed_discriminant_rep: size mismatch");
    std::vector<Mat> expanded;
    for (std::size_t i = 0; i < matrices.size(); ++i)
        for (int r = 0; r < repeats[i]; ++r) expanded.push_back(matrices[i]);
    return mixed_discriminant(std::span<const Mat>(expanded));
}

}  // namespace mixedvol
