#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>

// Dense complex matrix algebra for small unitary groups.
// All matrices are N x N with N <= kMaxRank; storage is inline, no heap.

namespace levyt {

inline constexpr int kMaxDim = 4;   // spatial directions
inline constexpr int kMaxRank = 4;  // matrix size N

using Complex = std::complex<double>;
using CMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                           Eigen::ColMajor, kMaxRank, kMaxRank>;

CMat zero_mat(int n);
CMat identity_mat(int n);

// [a, b] = ab - ba. Anti-Hermitian inputs give an anti-Hermitian result.
CMat commutator(const CMat& a, const CMat& b);

Complex trace(const CMat& a);
double frob_norm(const CMat& a);

// ||m + m^dagger||_F against an absolute-plus-relative tolerance.
bool is_anti_hermitian(const CMat& m, double tol = 1e-12);
bool is_unitary(const CMat& m, double tol = 1e-12);
double unitarity_defect(const CMat& m);

// exp(x) for anti-Hermitian x, through the spectral decomposition of i*x.
// The result is unitary to roundoff. Throws std::invalid_argument if x is
// not anti-Hermitian within tolerance.
CMat mat_exp(const CMat& x);

// Unitary factor of the polar decomposition of an invertible matrix.
CMat polar_unitary(const CMat& m);

// sigma_1, sigma_2, sigma_3 (Hermitian, traceless).
CMat pauli(int k);

// Seeded anti-Hermitian sample with entries of order one, for tests.
CMat random_anti_hermitian(int n, std::uint64_t seed);

}  // namespace levyt
