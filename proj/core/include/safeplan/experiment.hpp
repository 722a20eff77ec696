#pragma once

#include "safeplan/bench_domains.hpp"
#include "safeplan/experiment_record.hpp"
#include "safeplan/pac.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace safeplan {

enum class MuMode {
    exact_solvable,   // solvable = a plan exists on the true model
    planner_relative, // solvable = the reference producer returned a trajectory
};

const char *to_string(MuMode m);
MuMode mu_mode_from_string(const std::string &s);

struct ExperimentConfig {
    LogisticsConfig domain;
    DistConfig train_dist;      // training draws are always solvable-only
    DistConfig eval_dist;
    std::vector<std::size_t> m_values;
    std::size_t eval_instances = 200;
    std::size_t runs = 1;
    double epsilon = 0.1;
    double delta = 0.05;
    std::uint64_t seed = 0;
    MuMode mu_mode = MuMode::exact_solvable;
    SearchLimits limits;        // for our planner on compiled problems
    unsigned jobs = 1;
    std::string label;          // empty: derived from the domain config

    // Called after each finished (m, run) cell; may be invoked from worker
    // threads, but never concurrently.
    std::function<void(const ExperimentRecord &)> progress;
};

// Throws ValidationError unless m_values is non-empty and strictly
// ascending, eval_instances >= 1 and runs >= 1.
void check_experiment_config(const ExperimentConfig &cfg);

/*
  For each m and run: draw m solvable training trajectories, learn, then for
  each of eval_instances fresh draws compile and solve, validating every
  returned plan against the true model. Training and evaluation streams are
  derived from the master seed by (m, run, role), so records are identical
  regardless of `jobs`. Records come back sorted by (m, run).
*/
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig &cfg);

struct PacVerdict {
    bool applicable = false;    // false if no record reaches the required m
    std::uint64_t required_m = 0;
    std::size_t runs = 0;
    std::size_t runs_within_epsilon = 0;
    double fraction_within = 0;
    bool pass = false;          // fraction_within >= 1 - delta
    double max_failure_rate = 0;
    double mean_failure_rate = 0;
    std::size_t unsafe_plans = 0;
};

/*
  A run is within epsilon when its conditional failure rate (1 - solve_rate)
  is at most epsilon. Only records with m >= required_m are considered;
  required_m defaults to sample_complexity(params).m.
*/
PacVerdict check_pac_claim(std::span<const ExperimentRecord> records, const PacParams &params,
                           std::optional<std::uint64_t> required_m = std::nullopt);

// Mean solve_rate per m, in ascending m order.
std::vector<std::pair<std::size_t, double>> mean_solve_rate_by_m(
    std::span<const ExperimentRecord> records);

} // namespace safeplan
