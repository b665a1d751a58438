#pragma once

#include <utility>
#include <vector>

#include "rkf/model.hpp"

namespace rkf {

// Player state at round t: hypothesis xhat, matrix sigma, cumulative loss.
struct FilterState {
    long t = 0;
    Vector xhat;
    Matrix sigma;
    double cum_loss = 0.0;
};

struct StepRecord {
    long t = 0;
    Vector y;
    Vector yhat;
    double loss = 0.0;
    Matrix gain;  // K_t
};

// Online predict / update recursion. States are immutable values; step
// returns a new state, so independent runs can proceed concurrently.
class Filter {
public:
    explicit Filter(SystemModel model);

    // t = 0, xhat = 0, sigma = I_n, cum_loss = 0.
    FilterState init() const;

    // yhat = C xhat.
    Vector predict(const FilterState& state) const;

    // One round: incur loss on y, update xhat via the gain K_t and sigma via
    // the Riccati recursion.
    std::pair<FilterState, StepRecord> step(const FilterState& state, const Vector& y) const;

    // Folds step over the observation sequence starting from init().
    std::pair<FilterState, std::vector<StepRecord>> run(const std::vector<Vector>& observations) const;

    const SystemModel& model() const { return model_; }
    const Matrix& ct_vinv_c() const { return ctvinvc_; }

private:
    SystemModel model_;
    Eigen::LLT<Matrix> v_llt_;  // factorization of V, computed once
    Matrix ctvinv_;             // C' V^{-1}
    Matrix ctvinvc_;            // C' V^{-1} C
};

}  // namespace rkf
