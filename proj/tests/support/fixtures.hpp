#pragma once

// Shared test fixtures and independent oracles. Nothing here calls the
// planner, learner or audit code it is used to check.

#include "safeplan/bench_domains.hpp"
#include "safeplan/rng.hpp"
#include "safeplan/sas.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace safeplan::testing {

// logistics_3loc value ids.
inline constexpr ValueId A = 0, B = 1, C = 2, T = 3;
inline constexpr VarId TruckAt = 0, PackageAt = 1;

inline State ls(ValueId truck, ValueId package) {
    return State({truck, package});
}

// Truck drives A to B, loads the package, drives to C and unloads it.
inline Trajectory t1() {
    Trajectory t;
    t.id = "T1";
    t.states = {ls(A, B), ls(B, B), ls(B, T), ls(C, T), ls(C, C)};
    t.actions = {"Move_A_B", "Pickup_B", "Move_B_C", "Unload_C"};
    t.goal = PartialAssignment{{PackageAt, C}};
    return t;
}

// Move_A_B with the package elsewhere.
inline Trajectory t_move_ab_package_at_a() {
    Trajectory t;
    t.id = "T2";
    t.states = {ls(A, A), ls(B, A)};
    t.actions = {"Move_A_B"};
    return t;
}

// Plain BFS over std::set<State> using only is_applicable/apply. Returns the
// shortest goal distance from init, or nullopt if unreachable.
inline std::optional<std::size_t> brute_force_distance(const ActionModel &model, const State &init,
                                                       const PartialAssignment &goal) {
    std::map<State, std::size_t> dist{{init, 0}};
    std::deque<State> queue{init};
    while (!queue.empty()) {
        State s = queue.front();
        queue.pop_front();
        if (satisfies_goal(s, goal))
            return dist[s];
        for (const auto &[name, a] : model.actions()) {
            if (!is_applicable(s, a))
                continue;
            State n = apply(s, a);
            if (dist.emplace(n, dist[s] + 1).second)
                queue.push_back(n);
        }
    }
    return std::nullopt;
}

inline std::set<State> brute_force_reachable(const ActionModel &model, const State &init) {
    std::set<State> seen{init};
    std::deque<State> queue{init};
    while (!queue.empty()) {
        State s = queue.front();
        queue.pop_front();
        for (const auto &[name, a] : model.actions()) {
            if (is_applicable(s, a)) {
                State n = apply(s, a);
                if (seen.insert(n).second)
                    queue.push_back(n);
            }
        }
    }
    return seen;
}

inline std::vector<State> all_states(const Variables &vars) {
    std::vector<State> out{State(std::vector<ValueId>(vars.size(), 0))};
    for (std::size_t i = 0; i < vars.size(); ++i) {
        std::vector<State> next;
        for (const State &s : out) {
            for (int v = 0; v < vars[i].domain_size(); ++v) {
                State t = s;
                t.set(static_cast<VarId>(i), v);
                next.push_back(t);
            }
        }
        out = std::move(next);
    }
    return out;
}

inline State random_state(const Variables &vars, RngStream &rng) {
    std::vector<ValueId> v(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i)
        v[i] = static_cast<ValueId>(rng.uniform_below(static_cast<std::uint64_t>(vars[i].domain_size())));
    return State(std::move(v));
}

inline PartialAssignment random_partial(const Variables &vars, RngStream &rng, double density) {
    PartialAssignment pa;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (rng.bernoulli(density))
            pa.set(static_cast<VarId>(i),
                   static_cast<ValueId>(rng.uniform_below(static_cast<std::uint64_t>(vars[i].domain_size()))));
    }
    return pa;
}

// Random SAS+ model: `nvars` variables with domains in [2, max_domain],
// `nactions` actions with sparse random pre/eff.
inline ActionModel random_sas_model(RngStream &rng, int nvars, int max_domain, int nactions) {
    Variables vars;
    for (int i = 0; i < nvars; ++i) {
        VariableSpec v{"v" + std::to_string(i), {}};
        const auto d = rng.uniform_int(2, max_domain);
        for (int k = 0; k < d; ++k)
            v.value_names.push_back("x" + std::to_string(k));
        vars.push_back(std::move(v));
    }
    std::vector<Action> actions;
    for (int i = 0; i < nactions; ++i) {
        PartialAssignment pre = random_partial(vars, rng, 0.35);
        PartialAssignment eff = random_partial(vars, rng, 0.3);
        if (eff.empty()) {
            auto var = static_cast<std::size_t>(rng.uniform_below(vars.size()));
            eff.set(static_cast<VarId>(var),
                    static_cast<ValueId>(rng.uniform_below(static_cast<std::uint64_t>(vars[var].domain_size()))));
        }
        actions.emplace_back("op" + std::to_string(100 + i), pre, eff);
    }
    return ActionModel(std::move(vars), std::move(actions));
}

// High-precision evaluation of (2 ln d) |A| / eps * (|X| + log2(2|A| / delta)).
using BigFloat = boost::multiprecision::cpp_bin_float_50;

inline BigFloat pac_bound_oracle(int d, long long actions, long long vars, double eps, double delta) {
    using boost::multiprecision::log;
    const BigFloat A(actions);
    const BigFloat two(2);
    const BigFloat lead = two * log(BigFloat(d)) * A / BigFloat(eps);
    const BigFloat inner = BigFloat(vars) + log(two * A / BigFloat(delta)) / log(two);
    return lead * inner;
}

} // namespace safeplan::testing
