#pragma once

#include <cstdint>
#include <vector>

#include "rkf/model.hpp"

namespace rkf {

enum class DriftRegime { linear, sublinear };
enum class NoiseKind { unit_gaussian, none };

struct DriftSpec {
    DriftRegime regime = DriftRegime::linear;
    double delta = 1.0;  // per-step drift norm (linear regime)
    double beta = 0.5;   // decay exponent (sublinear regime)
    NoiseKind noise_v = NoiseKind::unit_gaussian;
    std::uint64_t seed = 0;
};

// Comparator trajectory, its drift terms and the observations they produce:
//   xbar_{t+1} = A xbar_t + w_t,   y_t = C xbar_t + v_t.
struct GeneratedRun {
    std::vector<Vector> xbar;          // length T+1
    std::vector<Vector> w;             // length T
    std::vector<Vector> observations;  // length T
};

// xbar_0 = 0. Linear regime: w_t is a standard-normal direction scaled to
// exact norm delta. Sublinear regime: |w_t|^2 = (t+1)^{-beta}, direction
// rotating in the plane of the first two coordinates (0.1 rad per step);
// requires n >= 2. Deterministic per seed.
GeneratedRun generate(const SystemModel& model, const DriftSpec& spec, long t_rounds);

// Analytic upper budget on W_T: linear -> T delta^2; sublinear beta = 1 ->
// log(T) + 1; otherwise (T^{1-beta} - beta) / (1 - beta).
double drift_budget(const DriftSpec& spec, long t_rounds);

}  // namespace rkf
