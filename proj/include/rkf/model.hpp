#pragma once

#include <cstdint>

#include "rkf/linops.hpp"

namespace rkf {

// The 4-tuple (A, C, V, Q) defining the prediction game. Q and V are the
// drift / loss weighting matrices and must be symmetric positive definite.
struct SystemModel {
    Matrix a;  // n x n state transition
    Matrix c;  // p x n observation map
    Matrix q;  // n x n drift weighting
    Matrix v;  // p x p loss weighting
    int n = 0;
    int p = 0;
};

// Validates dimensions and positive definiteness; throws std::invalid_argument.
SystemModel make_system(Matrix a, Matrix c, Matrix q, Matrix v);

// Structural hypotheses checked via PBH rank tests.
struct StructureReport {
    bool detectable = false;      // (C, A): rank [lambda I - A; C] = n for |lambda| >= 1
    bool stabilizable = false;    // (A, Q^{1/2}): same, horizontal pencil
    bool a_nonsingular = false;
    bool controllable_aq = false; // (A, Q^{1/2}) at every eigenvalue
};

StructureReport validate(const SystemModel& model);

// Random stable system: A standard-normal rescaled to spectral radius in
// [0.3, 0.9], C dense standard-normal, Q = 0.5 I, V = I. Regenerates until
// the PBH tests pass; deterministic per seed.
SystemModel random_stable_system(int n, int p, std::uint64_t seed);

}  // namespace rkf
