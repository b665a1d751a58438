#include "rkf/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rkf {

BoundConstants constants(const SystemModel& model, const SteadySummary& ss) {
    BoundConstants k;
    const Matrix vis = symmetric_inv_sqrt(model.v);
    const Matrix inner = symmetrize(
        vis * (model.v + model.c * ss.sigma_ss * model.c.transpose()) * vis);
    k.r_bar = largest_singular_value(inner);

    Eigen::SelfAdjointEigenSolver<Matrix> sigma_eig(ss.sigma_ss, Eigen::EigenvaluesOnly);
    k.a = 1.0 / sigma_eig.eigenvalues().minCoeff();

    const double sk = largest_singular_value(ss.k_ss);
    k.sigma_kk = sk * sk;

    Eigen::SelfAdjointEigenSolver<Matrix> q_eig(model.q, Eigen::EigenvaluesOnly);
    k.sigma_qinv = 1.0 / q_eig.eigenvalues().minCoeff();

    k.sigma_h = ss.sigma_h;
    if (ss.sigma_h < 1.0) {
        const double s2 = ss.sigma_h * ss.sigma_h;
        k.b = 1.0 / (1.0 - s2);
        k.c = (1.0 + s2) / std::pow(1.0 - s2, 3);
    }
    return k;
}

ComparatorTrace accumulate_comparator(const SystemModel& model,
                                      const std::vector<Vector>& xbar,
                                      const std::vector<Vector>& observations) {
    if (xbar.size() != observations.size() + 1)
        throw std::invalid_argument("accumulate_comparator: need T+1 comparator states for T observations");

    Eigen::LLT<Matrix> v_llt(model.v);
    ComparatorTrace trace;
    trace.xbar = xbar;
    trace.xbar0_normsq = xbar.front().squaredNorm();
    for (std::size_t t = 0; t < observations.size(); ++t) {
        const Vector residual = observations[t] - model.c * xbar[t];
        trace.v_t_cum += residual.dot(v_llt.solve(residual));
        trace.w_t_cum += (xbar[t + 1] - model.a * xbar[t]).squaredNorm();
    }
    return trace;
}

double lemma3_bound(const BoundConstants& k, double v_t, double w_t,
                    double xbar0_normsq, double xtilde_cum, double alpha) {
    if (alpha <= 0.0) throw std::domain_error("lemma3_bound: alpha must be positive");
    return k.r_bar * v_t + k.r_bar * xbar0_normsq +
           k.r_bar * k.a * (xtilde_cum / alpha + alpha * w_t);
}

double lemma3_bound(const BoundConstants& k, const ComparatorTrace& trace,
                    double xtilde_cum, double alpha) {
    return lemma3_bound(k, trace.v_t_cum, trace.w_t_cum, trace.xbar0_normsq,
                        xtilde_cum, alpha);
}

double xtilde_cum_bound(const BoundConstants& k, double v_t, double w_t,
                        double xbar0_normsq) {
    if (!k.b1_applicable())
        throw std::domain_error("xtilde_cum_bound: b, c unavailable (sigma_max(H) >= 1)");
    return 2.0 * *k.b * xbar0_normsq + 8.0 * *k.c * (w_t + k.sigma_kk * v_t);
}

double xtilde_cum_bound(const BoundConstants& k, const ComparatorTrace& trace) {
    return xtilde_cum_bound(k, trace.v_t_cum, trace.w_t_cum, trace.xbar0_normsq);
}

BoundValue bound_b1(const BoundConstants& k, double v_t, double w_t,
                    double xbar0_normsq) {
    if (!k.b1_applicable())
        throw std::domain_error("bound_b1: b, c unavailable (sigma_max(H) >= 1)");
    const double inner = *k.b * xbar0_normsq + 4.0 * *k.c * (w_t + k.sigma_kk * v_t);
    BoundValue out;
    out.value = k.r_bar * v_t + k.r_bar * xbar0_normsq +
                2.0 * k.r_bar * k.a * std::sqrt(2.0 * w_t * inner);
    // The drift term drops as alpha grows without bound when W_T = 0.
    out.alpha = w_t > 0.0 ? std::sqrt(2.0 * inner / w_t)
                          : std::numeric_limits<double>::infinity();
    return out;
}

BoundValue bound_b1(const BoundConstants& k, const ComparatorTrace& trace) {
    return bound_b1(k, trace.v_t_cum, trace.w_t_cum, trace.xbar0_normsq);
}

BoundValue bound_b3(const BoundConstants& k, double v_t, double w_t,
                    double xbar0_normsq) {
    const double s = (std::sqrt(k.r_bar) + 1.0) * (std::sqrt(k.r_bar) + 1.0);
    const double disturbance = xbar0_normsq + v_t + k.sigma_qinv * w_t;
    BoundValue out;
    out.value = (1.0 + s) * v_t + s * xbar0_normsq + s * k.sigma_qinv * w_t +
                2.0 * (std::sqrt(k.r_bar) + 1.0) * std::sqrt(v_t * disturbance);
    // alpha -> 0+ limit when V_T = 0.
    out.alpha = (v_t > 0.0 && disturbance > 0.0) ? std::sqrt(v_t / (s * disturbance))
                                                 : 0.0;
    return out;
}

BoundValue bound_b3(const BoundConstants& k, const ComparatorTrace& trace) {
    return bound_b3(k, trace.v_t_cum, trace.w_t_cum, trace.xbar0_normsq);
}

double lemma5_rhs(const Vector& a_vec, const Vector& b_vec, const Matrix& m,
                  double alpha) {
    if (alpha <= 0.0) throw std::domain_error("lemma5_rhs: alpha must be positive");
    if (!is_positive_definite(m, 0.0))
        throw std::domain_error("lemma5_rhs: M must be symmetric positive definite");
    return (1.0 + 1.0 / alpha) * weighted_norm_sq(a_vec, m) +
           (1.0 + alpha) * weighted_norm_sq(b_vec, m);
}

Infimum prop1_infimum(double a, double b) {
    if (a <= 0.0 || b <= 0.0)
        throw std::domain_error("prop1_infimum: a, b must be positive");
    return {2.0 * std::sqrt(a * b), std::sqrt(a / b)};
}

PolylogResult polylog_bound(double s, long t) {
    if (s < 0.0 || s >= 1.0)
        throw std::domain_error("polylog_bound: s must lie in [0, 1)");
    PolylogResult out;
    double pow_s = 1.0;
    for (long k = 0; k < t; ++k) {
        out.finite_sum += static_cast<double>((k + 1) * (k + 1)) * pow_s;
        pow_s *= s;
    }
    out.bound = (1.0 + s) / std::pow(1.0 - s, 3);
    return out;
}

}  // namespace rkf
