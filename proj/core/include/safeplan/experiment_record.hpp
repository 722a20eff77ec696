#pragma once

#include <cstddef>
#include <string>

namespace safeplan {

inline constexpr int results_schema_version = 1;

// One (m, run) cell of an experiment sweep.
struct ExperimentRecord {
    std::string label;              // domain/config description
    std::size_t m = 0;              // training trajectories
    std::size_t run = 0;
    std::size_t observed_actions = 0;
    std::size_t eval_instances = 0;
    std::size_t solvable = 0;       // eval instances counted as solvable
    std::size_t solved = 0;         // solvable instances our planner solved
    std::size_t plans_found = 0;    // all instances with a returned plan
    std::size_t unsolved_solvable = 0;
    std::size_t unsafe_plans = 0;   // plans failing on the true model; must be 0
    std::size_t resource_limits = 0;
    double solve_rate = 0;          // solved / solvable (1 if nothing solvable)
    double plan_rate = 0;           // plans_found / eval_instances
    double mean_plan_length = 0;
    double mu_hat = 0;              // solvable / eval_instances
    double wall_seconds = 0;        // not written unless timing is requested

    bool operator==(const ExperimentRecord &) const = default;
};

} // namespace safeplan
