#include "rkf/linops.hpp"

#include <stdexcept>

namespace rkf {

namespace {

void require_finite(const Matrix& m) {
    if (!m.allFinite()) throw std::domain_error("matrix has non-finite entries");
}

void require_square(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("matrix must be square");
}

double asymmetry(const Matrix& m) {
    return (m - m.transpose()).cwiseAbs().maxCoeff();
}

double scale_of(const Matrix& m) {
    double s = m.cwiseAbs().maxCoeff();
    return s > 1.0 ? s : 1.0;
}

}  // namespace

double largest_singular_value(const Matrix& m) {
    require_finite(m);
    // JacobiSVD is deterministic across runs on the same platform.
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

double spectral_radius(const Matrix& m) {
    require_square(m);
    require_finite(m);
    Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_positive_definite(const Matrix& m, double tol) {
    require_square(m);
    require_finite(m);
    if (asymmetry(m) > tol * scale_of(m)) return false;
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() > tol;
}

double weighted_norm_sq(const Vector& x, const Matrix& m) {
    if (m.rows() != m.cols() || m.cols() != x.size())
        throw std::invalid_argument("weighted_norm_sq: dimension mismatch");
    double v = x.dot(m * x);
    return v < 0.0 ? 0.0 : v;
}

bool psd_leq(const Matrix& m1, const Matrix& m2, double tol) {
    if (m1.rows() != m1.cols() || m1.rows() != m2.rows() || m1.cols() != m2.cols())
        throw std::invalid_argument("psd_leq: size mismatch");
    require_finite(m1);
    require_finite(m2);
    if (asymmetry(m1) > tol * scale_of(m1) || asymmetry(m2) > tol * scale_of(m2))
        throw std::domain_error("psd_leq: arguments must be symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m2 - m1), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

Matrix symmetrize(const Matrix& m) {
    return 0.5 * (m + m.transpose());
}

Matrix symmetric_sqrt(const Matrix& m) {
    require_square(m);
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
    if (es.eigenvalues().minCoeff() < 0.0)
        throw std::domain_error("symmetric_sqrt: matrix is not PSD");
    return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
           es.eigenvectors().transpose();
}

Matrix symmetric_inv_sqrt(const Matrix& m) {
    require_square(m);
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw std::domain_error("symmetric_inv_sqrt: matrix is not positive definite");
    return es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
           es.eigenvectors().transpose();
}

}  // namespace rkf
