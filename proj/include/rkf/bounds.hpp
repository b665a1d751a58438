#pragma once

#include <optional>
#include <vector>

#include "rkf/riccati.hpp"

namespace rkf {

// Constants entering the worst-case bounds, evaluated at the steady state.
// b and c exist only when sigma_max(H) < 1; B1 is inapplicable without them.
struct BoundConstants {
    double r_bar = 1.0;      // sigma_max(V^{-1/2} (V + C Sigma C') V^{-1/2})
    double a = 0.0;          // sigma_max(Sigma^{-1})
    std::optional<double> b; // 1 / (1 - sigma_max^2(H))
    std::optional<double> c; // (1 + sigma_max^2(H)) / (1 - sigma_max^2(H))^3
    double sigma_kk = 0.0;   // sigma_max(K'K) = sigma_max(K)^2
    double sigma_qinv = 0.0; // sigma_max(Q^{-1})
    double sigma_h = 0.0;

    bool b1_applicable() const { return b.has_value() && c.has_value(); }
};

// Comparator accumulators: V_T (comparator loss), W_T (total drift),
// and the squared norm of the initial comparator state.
struct ComparatorTrace {
    std::vector<Vector> xbar;
    double v_t_cum = 0.0;
    double w_t_cum = 0.0;
    double xbar0_normsq = 0.0;
};

struct BoundValue {
    double value = 0.0;
    double alpha = 0.0;  // +infinity when the drift term vanishes (B1)
};

BoundConstants constants(const SystemModel& model, const SteadySummary& ss);

// xbar has T+1 entries against T observations.
ComparatorTrace accumulate_comparator(const SystemModel& model,
                                      const std::vector<Vector>& xbar,
                                      const std::vector<Vector>& observations);

// Parametric bound: r V_T + r |xbar0|^2 + r a (Xtilde_T / alpha + alpha W_T).
double lemma3_bound(const BoundConstants& k, double v_t, double w_t,
                    double xbar0_normsq, double xtilde_cum, double alpha);
double lemma3_bound(const BoundConstants& k, const ComparatorTrace& trace,
                    double xtilde_cum, double alpha);

// 2 b |xbar0|^2 + 8 c (W_T + sigma_max(K'K) V_T).
double xtilde_cum_bound(const BoundConstants& k, double v_t, double w_t,
                        double xbar0_normsq);
double xtilde_cum_bound(const BoundConstants& k, const ComparatorTrace& trace);

// Tracking bound from the optimized parametric bound. Requires b, c.
BoundValue bound_b1(const BoundConstants& k, double v_t, double w_t,
                    double xbar0_normsq);
BoundValue bound_b1(const BoundConstants& k, const ComparatorTrace& trace);

// Bound derived from the H-infinity norm inequality; needs only r_bar and
// sigma_max(Q^{-1}).
BoundValue bound_b3(const BoundConstants& k, double v_t, double w_t,
                    double xbar0_normsq);
BoundValue bound_b3(const BoundConstants& k, const ComparatorTrace& trace);

// (1 + 1/alpha) a'Ma + (1 + alpha) b'Mb; dominates (a+b)'M(a+b).
double lemma5_rhs(const Vector& a_vec, const Vector& b_vec, const Matrix& m,
                  double alpha);

struct Infimum {
    double value = 0.0;
    double xi_star = 0.0;
};

// inf_{xi > 0} a/xi + xi b = 2 sqrt(ab) at xi = sqrt(a/b).
Infimum prop1_infimum(double a, double b);

struct PolylogResult {
    double finite_sum = 0.0;
    double bound = 0.0;
};

// Partial sum of (k+1)^2 s^k for k < t, together with its closed-form
// envelope (1+s)/(1-s)^3.
PolylogResult polylog_bound(double s, long t);

}  // namespace rkf
