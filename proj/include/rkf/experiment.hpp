#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rkf/bounds.hpp"
#include "rkf/drift.hpp"
#include "rkf/filter.hpp"

namespace rkf {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    // Either an inline system or (n, p, system_seed) for a random one.
    std::optional<SystemModel> system;
    int n = 10;
    int p = 4;
    std::uint64_t system_seed = 0;

    DriftSpec drift;

    long t_rounds = 0;
    std::string output_path = "run.csv";
    double tol_dare = 1e-12;
    long emit_every = 1;
};

struct SummaryRow {
    long t = 0;
    double l_t = 0.0;
    double v_t = 0.0;
    double w_t = 0.0;
    double b1 = 0.0;  // NaN when sigma_max(H) >= 1
    double b3 = 0.0;
    double avg_loss_gap = 0.0;  // (L_t - V_t) / t
    bool applicable_b1 = true;
};

// Flat key-value config with [system], [drift], [run] sections.
ExperimentConfig load_config(const std::string& path);

// Model file I/O: a [system] section with n, p and row-major matrix entries
// at 17 significant digits.
void save_model(const SystemModel& model, const std::string& path);
SystemModel load_model(const std::string& path);

// Materializes the configured system (inline or seeded random).
SystemModel build_model(const ExperimentConfig& config);

// Runs the filter on a generated comparator stream, evaluating both bounds
// at every horizon t. Rows are strided by emit_every (final round always
// kept).
std::vector<SummaryRow> run_experiment(const ExperimentConfig& config);

// Header t,L,V,W,B1,B3,avg_gap; reals at 17 significant digits.
void emit_csv(const std::vector<SummaryRow>& rows, const std::string& path);
std::vector<SummaryRow> parse_csv(const std::string& path);

struct SweepResult {
    std::uint64_t seed = 0;
    SummaryRow final_row;
    std::string csv_path;
};

// Repeats run_experiment over drift seeds, one CSV per seed plus
// aggregate.csv of final rows. RKF_THREADS caps parallelism (default
// sequential).
std::vector<SweepResult> run_sweep(const ExperimentConfig& base,
                                   const std::vector<std::uint64_t>& seeds,
                                   const std::string& out_dir);

// Built-in oracle checks; returns 0 on success, otherwise nonzero after
// printing the failing check. dare_perturbation shifts the scalar oracle
// expectation (negative-control hook for tests).
int selftest(double dare_perturbation = 0.0);

}  // namespace rkf
