#include "safeplan/bench_domains.hpp"

#include "safeplan/errors.hpp"

#include <set>

namespace safeplan {

namespace {

std::string location_name(int i, int n) {
    if (n <= 26)
        return std::string(1, static_cast<char>('A' + i));
    return "L" + std::to_string(i + 1);
}

} // namespace

ActionModel gen_logistics(const LogisticsConfig &cfg) {
    if (cfg.num_locations < 2)
        throw ValidationError("logistics needs at least 2 locations");
    if (cfg.num_trucks < 1 || cfg.num_packages < 1)
        throw ValidationError("logistics needs at least one truck and one package");

    const bool simple = cfg.num_trucks == 1 && cfg.num_packages == 1;
    const int L = cfg.num_locations;
    std::vector<std::string> locations;
    for (int i = 0; i < L; ++i)
        locations.push_back(location_name(i, L));

    auto truck = [](int t) { return "t" + std::to_string(t + 1); };
    auto package = [](int p) { return "p" + std::to_string(p + 1); };

    Variables vars;
    for (int t = 0; t < cfg.num_trucks; ++t)
        vars.push_back({simple ? "TruckAt" : "TruckAt_" + truck(t), locations});
    for (int p = 0; p < cfg.num_packages; ++p) {
        std::vector<std::string> values = locations;
        if (cfg.num_trucks == 1)
            values.push_back("T");
        else
            for (int t = 0; t < cfg.num_trucks; ++t)
                values.push_back("T" + std::to_string(t + 1));
        vars.push_back({simple ? "PackageAt" : "PackageAt_" + package(p), std::move(values)});
    }

    auto truck_var = [](int t) { return static_cast<VarId>(t); };
    auto package_var = [&](int p) { return static_cast<VarId>(cfg.num_trucks + p); };
    auto on_truck = [&](int t) { return static_cast<ValueId>(L + t); };

    std::vector<Action> actions;
    for (int t = 0; t < cfg.num_trucks; ++t) {
        const std::string tp = simple ? "" : truck(t) + "_";
        for (int x = 0; x < L; ++x) {
            for (int y = 0; y < L; ++y) {
                if (x == y)
                    continue;
                actions.emplace_back("Move_" + tp + locations[x] + "_" + locations[y],
                                     PartialAssignment{{truck_var(t), x}},
                                     PartialAssignment{{truck_var(t), y}});
            }
        }
        for (int p = 0; p < cfg.num_packages; ++p) {
            const std::string tpp = simple ? "" : truck(t) + "_" + package(p) + "_";
            for (int x = 0; x < L; ++x) {
                actions.emplace_back("Pickup_" + tpp + locations[x],
                                     PartialAssignment{{truck_var(t), x}, {package_var(p), x}},
                                     PartialAssignment{{package_var(p), on_truck(t)}});
                actions.emplace_back("Unload_" + tpp + locations[x],
                                     PartialAssignment{{truck_var(t), x}, {package_var(p), on_truck(t)}},
                                     PartialAssignment{{package_var(p), x}});
            }
        }
    }
    return ActionModel(std::move(vars), std::move(actions));
}

ActionModel logistics_3loc() {
    return gen_logistics(LogisticsConfig{3, 1, 1, 0});
}

const char *to_string(TrajectoryMode m) {
    switch (m) {
    case TrajectoryMode::optimal:
        return "optimal";
    case TrajectoryMode::random_optimal:
        return "random-optimal";
    case TrajectoryMode::walk_then_plan:
        return "walk";
    }
    return "unknown";
}

const char *to_string(GoalSource g) {
    return g == GoalSource::reachable ? "reachable" : "uniform";
}

TrajectoryMode trajectory_mode_from_string(const std::string &s) {
    if (s == "optimal")
        return TrajectoryMode::optimal;
    if (s == "random-optimal")
        return TrajectoryMode::random_optimal;
    if (s == "walk")
        return TrajectoryMode::walk_then_plan;
    throw ValidationError("unknown trajectory mode '" + s + "'");
}

GoalSource goal_source_from_string(const std::string &s) {
    if (s == "reachable")
        return GoalSource::reachable;
    if (s == "uniform")
        return GoalSource::uniform;
    throw ValidationError("unknown goal source '" + s + "'");
}

namespace {

Trajectory replay(const ActionModel &truth, const State &init, const std::vector<std::string> &steps) {
    Trajectory t;
    t.states.push_back(init);
    for (const std::string &name : steps) {
        t.states.push_back(apply(t.states.back(), truth.at(name)));
        t.actions.push_back(name);
    }
    return t;
}

// Follows uniformly random shortest-path edges from graph state `from`.
std::vector<std::string> random_optimal_path(const ReachabilityGraph &graph,
                                             const std::vector<std::optional<std::size_t>> &dist,
                                             std::size_t from, RngStream &rng) {
    std::vector<std::string> steps;
    std::size_t cur = from;
    while (*dist[cur] > 0) {
        std::vector<const ReachabilityGraph::Edge *> best;
        for (const auto &e : graph.edges[cur]) {
            if (dist[e.target] && *dist[e.target] + 1 == *dist[cur])
                best.push_back(&e);
        }
        const auto *pick = best[rng.uniform_below(best.size())];
        steps.push_back(graph.action_names[pick->action]);
        cur = pick->target;
    }
    return steps;
}

} // namespace

std::optional<Trajectory> produce_trajectory(const ActionModel &truth, const State &init,
                                             const PartialAssignment &goal,
                                             const DistConfig &cfg, RngStream &rng) {
    const Problem prob(truth, init, goal);
    const SearchResult optimal = solve(prob, cfg.limits);
    if (!optimal.solved())
        return std::nullopt;
    if (cfg.producer_max_length != 0 && optimal.plan.size() > cfg.producer_max_length)
        return std::nullopt;

    std::vector<std::string> steps;
    switch (cfg.mode) {
    case TrajectoryMode::optimal:
        steps = optimal.plan.steps;
        break;
    case TrajectoryMode::random_optimal: {
        const ReachabilityGraph graph = explore(truth, init);
        const auto dist = goal_distances(graph, goal);
        steps = random_optimal_path(graph, dist, 0, rng);
        break;
    }
    case TrajectoryMode::walk_then_plan: {
        const ReachabilityGraph graph = explore(truth, init);
        const auto dist = goal_distances(graph, goal);
        const auto walk_len = static_cast<int>(rng.uniform_int(0, std::max(cfg.walk_max, 0)));
        std::size_t cur = 0;
        for (int i = 0; i < walk_len; ++i) {
            // Only step to states from which the goal stays reachable.
            std::vector<const ReachabilityGraph::Edge *> ok;
            for (const auto &e : graph.edges[cur]) {
                if (dist[e.target])
                    ok.push_back(&e);
            }
            if (ok.empty())
                break;
            const auto *pick = ok[rng.uniform_below(ok.size())];
            steps.push_back(graph.action_names[pick->action]);
            cur = pick->target;
        }
        auto rest = random_optimal_path(graph, dist, cur, rng);
        steps.insert(steps.end(), rest.begin(), rest.end());
        break;
    }
    }
    Trajectory t = replay(truth, init, steps);
    t.goal = goal;
    return t;
}

InstanceTriple sample_instance(const ActionModel &truth, const DistConfig &cfg, RngStream &rng) {
    if (truth.num_actions() == 0)
        throw SamplingError("cannot sample instances from a model without actions");
    if (!(cfg.goal_density >= 0.0 && cfg.goal_density <= 1.0))
        throw ValidationError("goal density must be in [0, 1]");
    const Variables &vars = truth.variables();
    if (vars.empty())
        throw SamplingError("cannot sample instances from a model without variables");

    InstanceTriple out;
    for (;;) {
        std::vector<ValueId> values(vars.size());
        for (std::size_t i = 0; i < vars.size(); ++i)
            values[i] = static_cast<ValueId>(
                rng.uniform_below(static_cast<std::uint64_t>(vars[i].domain_size())));
        State init(std::move(values));

        std::vector<std::size_t> chosen;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (rng.bernoulli(cfg.goal_density))
                chosen.push_back(i);
        }
        if (chosen.empty())
            chosen.push_back(rng.uniform_below(vars.size()));

        const ReachabilityGraph graph = explore(truth, init);
        PartialAssignment goal;
        if (cfg.goal_source == GoalSource::reachable) {
            const State &target = graph.states[rng.uniform_below(graph.states.size())];
            for (std::size_t i : chosen)
                goal.set(static_cast<VarId>(i), target[static_cast<VarId>(i)]);
        } else {
            for (std::size_t i : chosen)
                goal.set(static_cast<VarId>(i),
                         static_cast<ValueId>(rng.uniform_below(
                             static_cast<std::uint64_t>(vars[i].domain_size()))));
        }

        bool solvable = false;
        for (const State &s : graph.states) {
            if (s.satisfies(goal)) {
                solvable = true;
                break;
            }
        }
        if (!solvable && graph.truncated)
            solvable = solve(Problem(truth, init, goal), cfg.limits).solved();

        std::optional<Trajectory> traj;
        if (solvable)
            traj = produce_trajectory(truth, init, goal, cfg, rng);

        if (traj || !cfg.solvable_only) {
            out.init = std::move(init);
            out.goal = std::move(goal);
            out.trajectory = std::move(traj);
            out.solvable = solvable;
            return out;
        }
        if (++out.rejected > cfg.max_rejections)
            throw SamplingError("gave up after " + std::to_string(out.rejected) +
                                " draws without a producible trajectory (goal density " +
                                std::to_string(cfg.goal_density) + ", producer limit " +
                                std::to_string(cfg.producer_max_length) + ")");
    }
}

std::map<std::string, double> estimate_action_frequencies(const ActionModel &truth,
                                                          const DistConfig &cfg,
                                                          std::size_t n_samples, RngStream &rng) {
    if (n_samples == 0)
        throw ValidationError("n_samples must be at least 1");
    std::map<std::string, std::size_t> hits;
    for (const auto &[name, a] : truth.actions())
        hits[name] = 0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        InstanceTriple inst = sample_instance(truth, cfg, rng);
        if (!inst.trajectory)
            continue;
        std::set<std::string> seen(inst.trajectory->actions.begin(), inst.trajectory->actions.end());
        for (const std::string &name : seen)
            ++hits[name];
    }
    std::map<std::string, double> freq;
    for (const auto &[name, n] : hits)
        freq[name] = static_cast<double>(n) / static_cast<double>(n_samples);
    return freq;
}

std::vector<Trajectory> sample_corpus(const ActionModel &truth, const DistConfig &cfg,
                                      std::size_t count, const RngStream &rng,
                                      const std::string &prefix) {
    DistConfig training = cfg;
    training.solvable_only = true;
    std::vector<Trajectory> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        RngStream stream = rng.derive(i);
        InstanceTriple inst = sample_instance(truth, training, stream);
        Trajectory t = std::move(*inst.trajectory);
        t.id = prefix + std::to_string(i);
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace safeplan
