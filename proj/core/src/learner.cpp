#include "safeplan/learner.hpp"

#include "safeplan/errors.hpp"

namespace safeplan {

TripletMap extract_triplets(std::span<const Trajectory> trajs) {
    TripletMap out;
    for (const Trajectory &t : trajs) {
        if (t.states.size() != t.actions.size() + 1)
            throw StructureError("trajectory '" + t.id + "' does not alternate states and actions");
        for (std::size_t i = 0; i < t.actions.size(); ++i)
            out[t.actions[i]].push_back({t.states[i], t.actions[i], t.states[i + 1]});
    }
    return out;
}

BoundsLearner::BoundsLearner(Variables vars) {
    check_variables(vars);
    model_.variables = std::move(vars);
}

namespace {
// Keeps only the facts of `bound` that also hold in `s`.
void intersect_with(PartialAssignment &bound, const State &s) {
    std::vector<Fact> kept;
    kept.reserve(bound.size());
    for (const Fact &f : bound) {
        if (s[f.var] == f.value)
            kept.push_back(f);
    }
    bound = PartialAssignment(std::move(kept));
}
} // namespace

void BoundsLearner::observe(const ActionTriplet &t) {
    check_state(model_.variables, t.pre_state);
    check_state(model_.variables, t.post_state);

    auto it = model_.actions.find(t.action);
    if (it == model_.actions.end()) {
        LearnedAction fresh;
        fresh.name = t.action;
        fresh.pre_upper = t.pre_state.as_assignment();
        fresh.eff_upper = t.post_state.as_assignment();
        it = model_.actions.emplace(t.action, std::move(fresh)).first;
    } else {
        intersect_with(it->second.pre_upper, t.pre_state);
        intersect_with(it->second.eff_upper, t.post_state);
    }
    LearnedAction &la = it->second;
    ++la.observations;

    for (std::size_t i = 0; i < t.pre_state.size(); ++i) {
        const auto var = static_cast<VarId>(i);
        const ValueId after = t.post_state[var];
        if (t.pre_state[var] == after)
            continue;
        auto known = la.eff_lower.get(var);
        if (known && *known != after) {
            const VariableSpec &spec = model_.variables[i];
            throw ModelInconsistencyError(
                "action '" + t.action + "' sets " + spec.name + " to both " +
                spec.value_names[static_cast<std::size_t>(*known)] + " and " +
                spec.value_names[static_cast<std::size_t>(after)]);
        }
        la.eff_lower.set(var, after);
    }
}

void BoundsLearner::observe(const Trajectory &t) {
    check_trajectory(model_.variables, t);
    for (std::size_t i = 0; i < t.actions.size(); ++i)
        observe(ActionTriplet{t.states[i], t.actions[i], t.states[i + 1]});
}

LearnedModel learn(std::span<const Trajectory> trajs, const Variables &vars) {
    BoundsLearner learner(vars);
    for (const Trajectory &t : trajs)
        learner.observe(t);
    return learner.model();
}

ActionModel learned_to_model(const LearnedModel &lm) {
    std::vector<Action> actions;
    actions.reserve(lm.actions.size());
    for (const auto &[name, la] : lm.actions)
        actions.emplace_back(name, la.pre_upper, la.eff_lower);
    return ActionModel(lm.variables, std::move(actions));
}

} // namespace safeplan
