#include "rkf/drift.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace rkf {

namespace {

constexpr double kRotationStep = 0.1;  // rad per round, sublinear regime

}  // namespace

GeneratedRun generate(const SystemModel& model, const DriftSpec& spec, long t_rounds) {
    if (t_rounds < 1) throw std::invalid_argument("generate: t_rounds must be >= 1");
    if (spec.regime == DriftRegime::sublinear && model.n < 2)
        throw std::invalid_argument("generate: sublinear rotation requires n >= 2");
    if (spec.regime == DriftRegime::sublinear && spec.beta <= 0.0)
        throw std::invalid_argument("generate: beta must be positive");
    if (spec.regime == DriftRegime::linear && spec.delta < 0.0)
        throw std::invalid_argument("generate: delta must be nonnegative");

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    GeneratedRun run;
    run.xbar.reserve(t_rounds + 1);
    run.w.reserve(t_rounds);
    run.observations.reserve(t_rounds);
    run.xbar.push_back(Vector::Zero(model.n));

    for (long t = 0; t < t_rounds; ++t) {
        Vector w(model.n);
        if (spec.regime == DriftRegime::linear) {
            double norm = 0.0;
            do {
                for (int i = 0; i < model.n; ++i) w(i) = normal(rng);
                norm = w.norm();
            } while (norm == 0.0);
            w *= spec.delta / norm;
        } else {
            const double mag = std::pow(static_cast<double>(t + 1), -spec.beta / 2.0);
            const double theta = kRotationStep * static_cast<double>(t);
            w.setZero();
            w(0) = mag * std::cos(theta);
            w(1) = mag * std::sin(theta);
        }

        Vector y = model.c * run.xbar.back();
        if (spec.noise_v == NoiseKind::unit_gaussian) {
            for (int i = 0; i < model.p; ++i) y(i) += normal(rng);
        }
        run.observations.push_back(std::move(y));
        run.xbar.push_back(model.a * run.xbar.back() + w);
        run.w.push_back(std::move(w));
    }
    return run;
}

double drift_budget(const DriftSpec& spec, long t_rounds) {
    if (t_rounds < 1) throw std::invalid_argument("drift_budget: t_rounds must be >= 1");
    const double t = static_cast<double>(t_rounds);
    if (spec.regime == DriftRegime::linear) return t * spec.delta * spec.delta;
    if (spec.beta == 1.0) return std::log(t) + 1.0;
    return (std::pow(t, 1.0 - spec.beta) - spec.beta) / (1.0 - spec.beta);
}

}  // namespace rkf
