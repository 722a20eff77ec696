#pragma once

#include "safeplan/planner.hpp"
#include "safeplan/rng.hpp"
#include "safeplan/sas.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace safeplan {

struct LogisticsConfig {
    int num_locations = 3;
    int num_trucks = 1;
    int num_packages = 1;
    std::uint64_t seed = 0; // generation is deterministic; kept for provenance
};

/*
  One-truck-one-package logistics with locations A, B, C, ... and the
  package-on-truck value T. With one truck and one package the variables are
  TruckAt / PackageAt and actions Move_X_Y, Pickup_X, Unload_X. With more,
  trucks t1.. and packages p1.. are named in the variables (TruckAt_t1,
  PackageAt_p1) and actions (Move_t1_X_Y, Pickup_t1_p1_X, Unload_t1_p1_X),
  and the on-truck values are T1, T2, ...
*/
ActionModel gen_logistics(const LogisticsConfig &cfg);

// The 12-action, 2-variable model with 3 locations, 1 truck, 1 package.
ActionModel logistics_3loc();

enum class TrajectoryMode {
    optimal,          // A* plan on the true model, fixed tie-breaking
    random_optimal,   // uniformly random choice among optimal successors
    walk_then_plan,   // bounded random walk, then an optimal completion
};

enum class GoalSource {
    reachable, // values copied from a uniformly chosen reachable state
    uniform,   // values drawn uniformly from each domain
};

const char *to_string(TrajectoryMode m);
const char *to_string(GoalSource g);
TrajectoryMode trajectory_mode_from_string(const std::string &s);
GoalSource goal_source_from_string(const std::string &s);

struct DistConfig {
    double goal_density = 0.5;
    GoalSource goal_source = GoalSource::reachable;
    TrajectoryMode mode = TrajectoryMode::optimal;
    int walk_max = 5;
    bool solvable_only = true;
    std::size_t max_rejections = 10'000;
    // The reference trajectory producer gives up on problems whose optimal
    // plan is longer than this (0 = never). Models a producer with limited
    // capabilities.
    std::size_t producer_max_length = 0;
    SearchLimits limits;
};

struct InstanceTriple {
    State init;
    PartialAssignment goal;
    // Absent when the producer found no trajectory (only returned when
    // solvable_only is false).
    std::optional<Trajectory> trajectory;
    // True when a plan exists on the true model.
    bool solvable = false;
    std::size_t rejected = 0;
};

// Runs the reference producer from a fixed (init, goal). Returns nullopt if
// the goal is unreachable or the producer gives up.
std::optional<Trajectory> produce_trajectory(const ActionModel &truth, const State &init,
                                             const PartialAssignment &goal,
                                             const DistConfig &cfg, RngStream &rng);

// Throws SamplingError once max_rejections unsolvable draws were rejected.
InstanceTriple sample_instance(const ActionModel &truth, const DistConfig &cfg, RngStream &rng);

// Fraction of n_samples sampled trajectories in which each action appears
// at least once. Every truth action gets an entry.
std::map<std::string, double> estimate_action_frequencies(const ActionModel &truth,
                                                          const DistConfig &cfg,
                                                          std::size_t n_samples, RngStream &rng);

// Draws `count` instances with streams derived from `rng` by index and
// returns their trajectories, ids "<prefix><index>".
std::vector<Trajectory> sample_corpus(const ActionModel &truth, const DistConfig &cfg,
                                      std::size_t count, const RngStream &rng,
                                      const std::string &prefix = "t");

} // namespace safeplan
