#pragma once

#include "safeplan/sas.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace safeplan {

struct SearchLimits {
    std::uint64_t max_generated = 10'000'000;
    double max_seconds = 60.0;
};

enum class SearchOutcome { plan, no_plan, resource_limit };

const char *to_string(SearchOutcome o);

struct SearchStats {
    std::uint64_t expanded = 0;
    std::uint64_t generated = 0;
    std::uint64_t peak_frontier = 0;
    double wall_seconds = 0.0;
};

struct SearchResult {
    SearchOutcome outcome = SearchOutcome::no_plan;
    Plan plan; // meaningful only when outcome == plan
    SearchStats stats;

    bool solved() const {
        return outcome == SearchOutcome::plan;
    }
};

/*
  Optimal A* over unit-cost SAS+ problems with the heuristic
  ceil(#unsatisfied goal facts / largest effect size in the model), which is
  consistent: one action can repair at most that many goal facts.

  Ties are broken by lower f, then lower h, then the lexicographically
  smaller state; successors are generated in action-name order. no_plan is
  only returned after the reachable space is exhausted.
*/
SearchResult solve(const Problem &prob, const SearchLimits &limits = {});

// Breadth-first search with exact duplicate detection. Same contract as
// solve(); used as an independent cross-check.
SearchResult solve_bfs(const Problem &prob, const SearchLimits &limits = {});

int goal_count_heuristic(const State &s, const PartialAssignment &goal, int max_effect_size);

/*
  Explicit forward reachability graph from a start state. States are numbered
  in BFS discovery order (index 0 is the start); edges list (action, target)
  in action-name order.
*/
struct ReachabilityGraph {
    struct Edge {
        std::size_t action; // index into `action_names`
        std::size_t target;
    };
    std::vector<std::string> action_names;
    std::vector<State> states;
    std::vector<std::vector<Edge>> edges;
    bool truncated = false; // true if `cap` stopped exploration early
};

ReachabilityGraph explore(const ActionModel &model, const State &start,
                          std::size_t cap = 1'000'000);

// Shortest distance from each graph state to any goal state, nullopt if no
// goal state is reachable from it.
std::vector<std::optional<std::size_t>> goal_distances(const ReachabilityGraph &graph,
                                                       const PartialAssignment &goal);

} // namespace safeplan
