#include "rkf/riccati.hpp"

namespace rkf {

namespace {

Matrix ct_vinv_c(const SystemModel& model) {
    Eigen::LLT<Matrix> v_llt(model.v);
    return symmetrize(model.c.transpose() * v_llt.solve(model.c));
}

}  // namespace

Matrix riccati_step(const Matrix& a, const Matrix& q, const Matrix& ctvinvc,
                    const Matrix& sigma) {
    const Eigen::Index n = a.rows();
    Eigen::LLT<Matrix> sigma_llt(sigma);
    if (sigma_llt.info() != Eigen::Success)
        throw std::runtime_error("riccati_step: sigma is not positive definite");
    const Matrix mid = symmetrize(sigma_llt.solve(Matrix::Identity(n, n)) + ctvinvc);
    Eigen::LLT<Matrix> mid_llt(mid);
    if (mid_llt.info() != Eigen::Success)
        throw std::runtime_error("riccati_step: information matrix not positive definite");
    return symmetrize(a * mid_llt.solve(a.transpose()) + q);
}

Matrix riccati_step(const SystemModel& model, const Matrix& sigma) {
    return riccati_step(model.a, model.q, ct_vinv_c(model), sigma);
}

SteadySummary solve_dare(const SystemModel& model, double tol, long max_iter) {
    const StructureReport rep = validate(model);
    if (!rep.detectable || !rep.stabilizable)
        throw std::invalid_argument("solve_dare: model must be detectable and stabilizable");

    const Matrix ctvinvc = ct_vinv_c(model);
    Matrix sigma = Matrix::Identity(model.n, model.n);
    double gap = 0.0;
    long k = 0;
    for (; k < max_iter; ++k) {
        Matrix next = riccati_step(model.a, model.q, ctvinvc, sigma);
        gap = largest_singular_value(next - sigma);
        sigma = std::move(next);
        if (gap <= tol) break;
    }
    if (gap > tol)
        throw ConvergenceError("solve_dare: no convergence within max_iter", gap);

    SteadySummary ss;
    ss.sigma_ss = sigma;
    Eigen::LLT<Matrix> sigma_llt(sigma);
    const Matrix mid = symmetrize(
        sigma_llt.solve(Matrix::Identity(model.n, model.n)) + ctvinvc);
    Eigen::LLT<Matrix> v_llt(model.v);
    ss.k_ss = model.a * Eigen::LLT<Matrix>(mid).solve(
        (v_llt.solve(model.c)).transpose());
    ss.h = model.a - ss.k_ss * model.c;
    ss.sigma_h = largest_singular_value(ss.h);
    ss.rho_h = spectral_radius(ss.h);
    ss.iterations = k + 1;
    ss.residual = dare_residual(model, sigma);
    return ss;
}

double dare_residual(const SystemModel& model, const Matrix& sigma) {
    if (!is_positive_definite(sigma, 1e-12))
        throw std::domain_error("dare_residual: sigma must be symmetric positive definite");
    return largest_singular_value(sigma - riccati_step(model, sigma));
}

std::vector<double> convergence_trace(const SystemModel& model, long t_max,
                                      double tol, long max_iter) {
    const SteadySummary ss = solve_dare(model, tol, max_iter);
    const Matrix ctvinvc = ct_vinv_c(model);
    std::vector<double> trace;
    trace.reserve(t_max + 1);
    Matrix sigma = Matrix::Identity(model.n, model.n);
    for (long k = 0; k <= t_max; ++k) {
        trace.push_back(largest_singular_value(sigma - ss.sigma_ss));
        if (k < t_max) sigma = riccati_step(model.a, model.q, ctvinvc, sigma);
    }
    return trace;
}

}  // namespace rkf
