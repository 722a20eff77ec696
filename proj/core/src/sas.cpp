#include "safeplan/sas.hpp"

#include "safeplan/errors.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

namespace safeplan {

void check_variables(const Variables &vars) {
    std::set<std::string_view> names;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        const VariableSpec &v = vars[i];
        if (v.value_names.empty())
            throw ValidationError("variable '" + v.name + "' has an empty domain");
        if (!names.insert(v.name).second)
            throw ValidationError("duplicate variable name '" + v.name + "'");
        std::set<std::string_view> values;
        for (const std::string &val : v.value_names) {
            if (!values.insert(val).second)
                throw ValidationError("variable '" + v.name + "' repeats value '" + val + "'");
        }
    }
}

int max_domain_size(const Variables &vars) {
    int d = 0;
    for (const VariableSpec &v : vars)
        d = std::max(d, v.domain_size());
    return d;
}

std::size_t state_space_size(const Variables &vars) {
    constexpr std::size_t limit = std::numeric_limits<std::size_t>::max();
    std::size_t n = 1;
    for (const VariableSpec &v : vars) {
        auto d = static_cast<std::size_t>(v.domain_size());
        if (d != 0 && n > limit / d)
            return limit;
        n *= d;
    }
    return n;
}

std::optional<VarId> find_variable(const Variables &vars, std::string_view name) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].name == name)
            return static_cast<VarId>(i);
    }
    return std::nullopt;
}

std::optional<ValueId> find_value(const VariableSpec &var, std::string_view name) {
    for (std::size_t i = 0; i < var.value_names.size(); ++i) {
        if (var.value_names[i] == name)
            return static_cast<ValueId>(i);
    }
    return std::nullopt;
}

PartialAssignment::PartialAssignment(std::initializer_list<Fact> facts)
    : PartialAssignment(std::vector<Fact>(facts)) {}

PartialAssignment::PartialAssignment(std::vector<Fact> facts) : facts_(std::move(facts)) {
    std::sort(facts_.begin(), facts_.end());
    for (std::size_t i = 1; i < facts_.size(); ++i) {
        if (facts_[i].var == facts_[i - 1].var)
            throw ValidationError("partial assignment sets variable " +
                                  std::to_string(facts_[i].var) + " twice");
    }
}

void PartialAssignment::set(Fact fact) {
    auto it = std::lower_bound(facts_.begin(), facts_.end(), fact.var,
                               [](const Fact &f, VarId v) { return f.var < v; });
    if (it != facts_.end() && it->var == fact.var)
        it->value = fact.value;
    else
        facts_.insert(it, fact);
}

void PartialAssignment::erase(VarId var) {
    auto it = std::lower_bound(facts_.begin(), facts_.end(), var,
                               [](const Fact &f, VarId v) { return f.var < v; });
    if (it != facts_.end() && it->var == var)
        facts_.erase(it);
}

std::optional<ValueId> PartialAssignment::get(VarId var) const {
    auto it = std::lower_bound(facts_.begin(), facts_.end(), var,
                               [](const Fact &f, VarId v) { return f.var < v; });
    if (it != facts_.end() && it->var == var)
        return it->value;
    return std::nullopt;
}

bool PartialAssignment::contains(Fact fact) const {
    auto v = get(fact.var);
    return v && *v == fact.value;
}

bool PartialAssignment::subset_of(const PartialAssignment &other) const {
    return std::includes(other.facts_.begin(), other.facts_.end(), facts_.begin(), facts_.end());
}

bool State::satisfies(const PartialAssignment &partial) const {
    for (const Fact &f : partial) {
        if (f.var < 0 || static_cast<std::size_t>(f.var) >= values_.size())
            throw ValidationError("variable id " + std::to_string(f.var) + " out of range");
        if (values_[static_cast<std::size_t>(f.var)] != f.value)
            return false;
    }
    return true;
}

PartialAssignment State::as_assignment() const {
    std::vector<Fact> facts;
    facts.reserve(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i)
        facts.push_back({static_cast<VarId>(i), values_[i]});
    return PartialAssignment(std::move(facts));
}

void check_state(const Variables &vars, const State &s) {
    if (s.size() != vars.size())
        throw ValidationError("state has " + std::to_string(s.size()) + " values, expected " +
                              std::to_string(vars.size()));
    for (std::size_t i = 0; i < vars.size(); ++i) {
        ValueId v = s[static_cast<VarId>(i)];
        if (v < 0 || v >= vars[i].domain_size())
            throw ValidationError("value " + std::to_string(v) + " out of range for variable '" +
                                  vars[i].name + "'");
    }
}

void check_assignment(const Variables &vars, const PartialAssignment &pa) {
    for (const Fact &f : pa) {
        if (f.var < 0 || static_cast<std::size_t>(f.var) >= vars.size())
            throw ValidationError("variable id " + std::to_string(f.var) + " out of range");
        if (f.value < 0 || f.value >= vars[static_cast<std::size_t>(f.var)].domain_size())
            throw ValidationError("value " + std::to_string(f.value) +
                                  " out of range for variable '" +
                                  vars[static_cast<std::size_t>(f.var)].name + "'");
    }
}

namespace {
PartialAssignment strip_restated(const PartialAssignment &pre, PartialAssignment eff) {
    std::vector<Fact> kept;
    for (const Fact &f : eff) {
        if (!pre.contains(f))
            kept.push_back(f);
    }
    return PartialAssignment(std::move(kept));
}
} // namespace

Action::Action(std::string name, PartialAssignment pre, PartialAssignment eff)
    : name_(std::move(name)), pre_(std::move(pre)), eff_(strip_restated(pre_, std::move(eff))) {
    if (name_.empty())
        throw ValidationError("action name must not be empty");
}

ActionModel::ActionModel(Variables variables, std::vector<Action> actions)
    : variables_(std::move(variables)) {
    check_variables(variables_);
    for (Action &a : actions)
        add(std::move(a));
}

void ActionModel::add(Action action) {
    try {
        check_assignment(variables_, action.pre());
        check_assignment(variables_, action.eff());
    } catch (const ValidationError &e) {
        throw ValidationError("action '" + action.name() + "': " + e.what());
    }
    std::string name = action.name();
    if (!actions_.emplace(name, std::move(action)).second)
        throw ValidationError("duplicate action name '" + name + "'");
}

const Action *ActionModel::find(std::string_view name) const {
    auto it = actions_.find(name);
    return it == actions_.end() ? nullptr : &it->second;
}

const Action &ActionModel::at(std::string_view name) const {
    const Action *a = find(name);
    if (!a)
        throw ResolutionError("unknown action '" + std::string(name) + "'");
    return *a;
}

Problem::Problem(ActionModel model_, State init_, PartialAssignment goal_)
    : model(std::move(model_)), init(std::move(init_)), goal(std::move(goal_)) {
    check_state(model.variables(), init);
    check_assignment(model.variables(), goal);
}

bool is_applicable(const State &s, const Action &a) {
    return s.satisfies(a.pre());
}

State apply(const State &s, const Action &a) {
    if (!is_applicable(s, a))
        throw PreconditionViolation("action '" + a.name() + "' is not applicable");
    State next = s;
    for (const Fact &f : a.eff()) {
        if (static_cast<std::size_t>(f.var) >= s.size())
            throw ValidationError("variable id " + std::to_string(f.var) + " out of range");
        next.set(f.var, f.value);
    }
    return next;
}

bool satisfies_goal(const State &s, const PartialAssignment &goal) {
    return s.satisfies(goal);
}

ValidationReport validate_plan(const Plan &plan, const Problem &prob) {
    std::vector<const Action *> resolved;
    resolved.reserve(plan.size());
    for (const std::string &name : plan.steps)
        resolved.push_back(&prob.model.at(name));

    ValidationReport report;
    report.states.push_back(prob.init);
    for (std::size_t i = 0; i < resolved.size(); ++i) {
        const State &cur = report.states.back();
        if (!is_applicable(cur, *resolved[i])) {
            report.failing_step = i;
            report.reason = PlanFailure::inapplicable;
            return report;
        }
        report.states.push_back(apply(cur, *resolved[i]));
    }
    if (!satisfies_goal(report.states.back(), prob.goal)) {
        report.failing_step = plan.size();
        report.reason = PlanFailure::goal_unsatisfied;
        return report;
    }
    report.success = true;
    return report;
}

const char *to_string(PlanFailure f) {
    switch (f) {
    case PlanFailure::none:
        return "none";
    case PlanFailure::inapplicable:
        return "inapplicable";
    case PlanFailure::goal_unsatisfied:
        return "goal-unsatisfied";
    }
    return "unknown";
}

void check_trajectory(const Variables &vars, const Trajectory &t) {
    if (t.states.size() != t.actions.size() + 1)
        throw StructureError("trajectory '" + t.id + "' has " + std::to_string(t.states.size()) +
                             " states and " + std::to_string(t.actions.size()) +
                             " actions; expected states = actions + 1");
    for (const State &s : t.states)
        check_state(vars, s);
    if (t.goal)
        check_assignment(vars, *t.goal);
}

void check_trajectory_consistent(const ActionModel &model, const Trajectory &t) {
    check_trajectory(model.variables(), t);
    for (std::size_t i = 0; i < t.actions.size(); ++i) {
        const Action *a = model.find(t.actions[i]);
        if (!a)
            throw ConsistencyError(i, "unknown action '" + t.actions[i] + "'");
        if (!is_applicable(t.states[i], *a))
            throw ConsistencyError(i, "action '" + a->name() + "' is not applicable in " +
                                          describe(model.variables(), t.states[i]));
        if (apply(t.states[i], *a) != t.states[i + 1])
            throw ConsistencyError(i, "applying '" + a->name() + "' yields " +
                                          describe(model.variables(), apply(t.states[i], *a)) +
                                          ", trajectory records " +
                                          describe(model.variables(), t.states[i + 1]));
    }
}

std::string describe(const Variables &vars, const PartialAssignment &pa) {
    std::ostringstream out;
    out << '{';
    bool first = true;
    for (const Fact &f : pa) {
        if (!first)
            out << ", ";
        first = false;
        auto var = static_cast<std::size_t>(f.var);
        if (var < vars.size() && f.value >= 0 && f.value < vars[var].domain_size())
            out << vars[var].name << '=' << vars[var].value_names[static_cast<std::size_t>(f.value)];
        else
            out << '#' << f.var << '=' << f.value;
    }
    out << '}';
    return out.str();
}

std::string describe(const Variables &vars, const State &s) {
    return describe(vars, s.as_assignment());
}

} // namespace safeplan
