#include "rkf/model.hpp"

#include <random>
#include <stdexcept>

namespace rkf {

namespace {

constexpr double kRankTol = 1e-8;     // singular values below kRankTol * max count as zero
constexpr double kUnitCircleTol = 1e-9;

using ComplexMatrix = Eigen::MatrixXcd;

int numeric_rank(const ComplexMatrix& m) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const auto& sv = svd.singularValues();
    double top = sv.size() > 0 ? sv(0) : 0.0;
    if (top == 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > kRankTol * top) ++r;
    return r;
}

// PBH observability pencil [lambda I - A; C] has full column rank at lambda.
bool pbh_observable_at(const Matrix& a, const Matrix& c, std::complex<double> lambda) {
    const int n = static_cast<int>(a.rows());
    const int p = static_cast<int>(c.rows());
    ComplexMatrix pencil(n + p, n);
    pencil.topRows(n) = lambda * ComplexMatrix::Identity(n, n) - a.cast<std::complex<double>>();
    pencil.bottomRows(p) = c.cast<std::complex<double>>();
    return numeric_rank(pencil) == n;
}

// PBH reachability pencil [lambda I - A, B] has full row rank at lambda.
bool pbh_reachable_at(const Matrix& a, const Matrix& b, std::complex<double> lambda) {
    const int n = static_cast<int>(a.rows());
    ComplexMatrix pencil(n, n + static_cast<int>(b.cols()));
    pencil.leftCols(n) = lambda * ComplexMatrix::Identity(n, n) - a.cast<std::complex<double>>();
    pencil.rightCols(b.cols()) = b.cast<std::complex<double>>();
    return numeric_rank(pencil) == n;
}

}  // namespace

SystemModel make_system(Matrix a, Matrix c, Matrix q, Matrix v) {
    const int n = static_cast<int>(a.rows());
    const int p = static_cast<int>(c.rows());
    if (a.cols() != n || n < 1) throw std::invalid_argument("A must be square and nonempty");
    if (c.cols() != n || p < 1) throw std::invalid_argument("C must be p x n");
    if (q.rows() != n || q.cols() != n) throw std::invalid_argument("Q must be n x n");
    if (v.rows() != p || v.cols() != p) throw std::invalid_argument("V must be p x p");
    if (!is_positive_definite(q, 1e-12)) throw std::invalid_argument("Q must be symmetric positive definite");
    if (!is_positive_definite(v, 1e-12)) throw std::invalid_argument("V must be symmetric positive definite");
    return SystemModel{std::move(a), std::move(c), std::move(q), std::move(v), n, p};
}

StructureReport validate(const SystemModel& model) {
    StructureReport rep;
    Eigen::EigenSolver<Matrix> es(model.a, /*computeEigenvectors=*/false);
    const auto eigs = es.eigenvalues();
    const Matrix q_sqrt = symmetric_sqrt(model.q);

    rep.detectable = true;
    rep.stabilizable = true;
    rep.controllable_aq = true;
    for (Eigen::Index i = 0; i < eigs.size(); ++i) {
        const std::complex<double> lambda = eigs(i);
        if (std::abs(lambda) >= 1.0 - kUnitCircleTol) {
            if (!pbh_observable_at(model.a, model.c, lambda)) rep.detectable = false;
            if (!pbh_reachable_at(model.a, q_sqrt, lambda)) rep.stabilizable = false;
        }
        if (!pbh_reachable_at(model.a, q_sqrt, lambda)) rep.controllable_aq = false;
    }
    rep.a_nonsingular = std::abs(model.a.partialPivLu().determinant()) > 1e-12;
    return rep;
}

SystemModel random_stable_system(int n, int p, std::uint64_t seed) {
    if (n < 1 || p < 1) throw std::invalid_argument("random_stable_system: n, p must be >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> radius(0.3, 0.9);

    for (;;) {
        Matrix a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
        double rho = spectral_radius(a);
        if (rho == 0.0) continue;
        a *= radius(rng) / rho;

        Matrix c(p, n);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < n; ++j) c(i, j) = normal(rng);

        SystemModel model = make_system(std::move(a), std::move(c),
                                        0.5 * Matrix::Identity(n, n),
                                        Matrix::Identity(p, p));
        StructureReport rep = validate(model);
        if (rep.detectable && rep.stabilizable && rep.controllable_aq) return model;
    }
}

}  // namespace rkf
