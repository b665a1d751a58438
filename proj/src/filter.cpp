#include "rkf/filter.hpp"

#include <stdexcept>

#include "rkf/riccati.hpp"

namespace rkf {

Filter::Filter(SystemModel model) : model_(std::move(model)) {
    v_llt_.compute(model_.v);
    if (v_llt_.info() != Eigen::Success)
        throw std::invalid_argument("Filter: V is not positive definite");
    // C' V^{-1} as the transpose of V^{-1} C keeps everything one SPD solve.
    Matrix vinv_c = v_llt_.solve(model_.c);
    ctvinv_ = vinv_c.transpose();
    ctvinvc_ = symmetrize(model_.c.transpose() * vinv_c);
}

FilterState Filter::init() const {
    FilterState s;
    s.t = 0;
    s.xhat = Vector::Zero(model_.n);
    s.sigma = Matrix::Identity(model_.n, model_.n);
    s.cum_loss = 0.0;
    return s;
}

Vector Filter::predict(const FilterState& state) const {
    return model_.c * state.xhat;
}

std::pair<FilterState, StepRecord> Filter::step(const FilterState& state, const Vector& y) const {
    if (y.size() != model_.p) throw std::invalid_argument("step: observation has wrong dimension");

    StepRecord rec;
    rec.t = state.t;
    rec.y = y;
    rec.yhat = predict(state);
    const Vector innov = y - rec.yhat;
    rec.loss = innov.dot(v_llt_.solve(innov));
    if (rec.loss < 0.0) rec.loss = 0.0;

    Eigen::LLT<Matrix> sigma_llt(state.sigma);
    if (sigma_llt.info() != Eigen::Success)
        throw std::runtime_error("step: sigma lost positive definiteness");
    const Matrix mid = symmetrize(
        sigma_llt.solve(Matrix::Identity(model_.n, model_.n)) + ctvinvc_);
    Eigen::LLT<Matrix> mid_llt(mid);
    if (mid_llt.info() != Eigen::Success)
        throw std::runtime_error("step: information matrix not positive definite");

    rec.gain = model_.a * mid_llt.solve(ctvinv_);

    FilterState next;
    next.t = state.t + 1;
    next.xhat = model_.a * state.xhat + rec.gain * innov;
    next.sigma = riccati_step(model_.a, model_.q, ctvinvc_, state.sigma);
    next.cum_loss = state.cum_loss + rec.loss;
    return {std::move(next), std::move(rec)};
}

std::pair<FilterState, std::vector<StepRecord>> Filter::run(
    const std::vector<Vector>& observations) const {
    FilterState state = init();
    std::vector<StepRecord> records;
    records.reserve(observations.size());
    for (const Vector& y : observations) {
        auto [next, rec] = step(state, y);
        state = std::move(next);
        records.push_back(std::move(rec));
    }
    return {std::move(state), std::move(records)};
}

}  // namespace rkf
