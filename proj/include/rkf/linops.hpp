#pragma once

#include <Eigen/Dense>

namespace rkf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Largest singular value of an arbitrary (possibly rectangular) matrix.
// Throws std::domain_error on non-finite entries.
double largest_singular_value(const Matrix& m);

// Maximum modulus of the eigenvalues of a square matrix.
double spectral_radius(const Matrix& m);

// True iff m is symmetric within tol and the smallest eigenvalue of its
// symmetric part exceeds tol.
bool is_positive_definite(const Matrix& m, double tol = 1e-12);

// x' m x, clamped at zero for PSD m.
double weighted_norm_sq(const Vector& x, const Matrix& m);

// PSD partial order: m1 <= m2 iff the smallest eigenvalue of (m2 - m1)
// is >= -tol. Both arguments must be symmetric within tol.
bool psd_leq(const Matrix& m1, const Matrix& m2, double tol = 1e-12);

// (m + m') / 2
Matrix symmetrize(const Matrix& m);

// Principal square root / inverse square root of a symmetric positive
// definite matrix, via eigendecomposition.
Matrix symmetric_sqrt(const Matrix& m);
Matrix symmetric_inv_sqrt(const Matrix& m);

}  // namespace rkf
