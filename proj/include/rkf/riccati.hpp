#pragma once

#include <stdexcept>
#include <vector>

#include "rkf/model.hpp"

namespace rkf {

// Steady-state summary: DARE solution, steady gain, closed loop and its
// spectral measures. sigma_h >= 1 with rho_h < 1 is a valid outcome; the
// bounds module decides which quantities remain applicable.
struct SteadySummary {
    Matrix sigma_ss;   // DARE solution
    Matrix k_ss;       // steady-state gain
    Matrix h;          // A - K C
    double sigma_h = 0.0;  // largest singular value of H
    double rho_h = 0.0;    // spectral radius of H
    long iterations = 0;
    double residual = 0.0;
};

struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, double gap)
        : std::runtime_error(what), last_gap(gap) {}
    double last_gap;
};

// One application of the sigma recursion:
//   A (sigma^{-1} + C'V^{-1}C)^{-1} A' + Q,
// with the inner inverse done by SPD solves and the result symmetrized.
Matrix riccati_step(const Matrix& a, const Matrix& q, const Matrix& ctvinvc,
                    const Matrix& sigma);
Matrix riccati_step(const SystemModel& model, const Matrix& sigma);

// Fixed-point iteration of the recursion from sigma = I until the iterate
// gap sigma_max(next - cur) <= tol. Requires a detectable / stabilizable
// model (throws std::invalid_argument otherwise, ConvergenceError on
// non-convergence).
SteadySummary solve_dare(const SystemModel& model, double tol = 1e-12,
                         long max_iter = 100000);

// Largest singular value of the DARE defect at sigma.
double dare_residual(const SystemModel& model, const Matrix& sigma);

// e_k = sigma_max(Sigma_k - Sigma) for k = 0..t_max, from Sigma_0 = I.
std::vector<double> convergence_trace(const SystemModel& model, long t_max,
                                      double tol = 1e-12, long max_iter = 100000);

}  // namespace rkf
