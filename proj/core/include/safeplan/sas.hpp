#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace safeplan {

using VarId = std::int32_t;
using ValueId = std::int32_t;

struct VariableSpec {
    std::string name;
    std::vector<std::string> value_names;

    int domain_size() const {
        return static_cast<int>(value_names.size());
    }

    bool operator==(const VariableSpec &) const = default;
};

using Variables = std::vector<VariableSpec>;

// Throws ValidationError if a variable has an empty domain, duplicate value
// names, or two variables share a name.
void check_variables(const Variables &vars);

// Largest domain size over all variables (0 for an empty set).
int max_domain_size(const Variables &vars);

// Number of total assignments, saturating at SIZE_MAX.
std::size_t state_space_size(const Variables &vars);

std::optional<VarId> find_variable(const Variables &vars, std::string_view name);
std::optional<ValueId> find_value(const VariableSpec &var, std::string_view name);

struct Fact {
    VarId var = 0;
    ValueId value = 0;

    auto operator<=>(const Fact &) const = default;
};

/*
  A consistent set of var=value pairs, at most one per variable. Facts are
  kept sorted by variable id, so equality and iteration order are canonical.
*/
class PartialAssignment {
public:
    using const_iterator = std::vector<Fact>::const_iterator;

    PartialAssignment() = default;
    PartialAssignment(std::initializer_list<Fact> facts);
    explicit PartialAssignment(std::vector<Fact> facts);

    // Replaces any existing value for fact.var.
    void set(Fact fact);
    void set(VarId var, ValueId value) {
        set(Fact{var, value});
    }
    void erase(VarId var);

    std::optional<ValueId> get(VarId var) const;
    bool contains(Fact fact) const;
    bool has_var(VarId var) const {
        return get(var).has_value();
    }

    bool subset_of(const PartialAssignment &other) const;

    std::size_t size() const {
        return facts_.size();
    }
    bool empty() const {
        return facts_.empty();
    }
    const_iterator begin() const {
        return facts_.begin();
    }
    const_iterator end() const {
        return facts_.end();
    }
    const std::vector<Fact> &facts() const {
        return facts_;
    }

    bool operator==(const PartialAssignment &) const = default;

private:
    std::vector<Fact> facts_;
};

class State {
public:
    State() = default;
    explicit State(std::vector<ValueId> values) : values_(std::move(values)) {}

    ValueId operator[](VarId var) const {
        return values_[static_cast<std::size_t>(var)];
    }
    void set(VarId var, ValueId value) {
        values_[static_cast<std::size_t>(var)] = value;
    }
    std::size_t size() const {
        return values_.size();
    }
    std::span<const ValueId> values() const {
        return values_;
    }

    bool satisfies(const PartialAssignment &partial) const;

    // The state viewed as a partial assignment over every variable.
    PartialAssignment as_assignment() const;

    auto operator<=>(const State &) const = default;

private:
    std::vector<ValueId> values_;
};

void check_state(const Variables &vars, const State &s);
void check_assignment(const Variables &vars, const PartialAssignment &pa);

/*
  An action with precondition and effect partial assignments. Effects that
  restate a precondition value are no-ops and are dropped on construction,
  so after construction no (var, value) pair is in both pre and eff.
*/
class Action {
public:
    Action(std::string name, PartialAssignment pre, PartialAssignment eff);

    const std::string &name() const {
        return name_;
    }
    const PartialAssignment &pre() const {
        return pre_;
    }
    const PartialAssignment &eff() const {
        return eff_;
    }

    bool operator==(const Action &) const = default;

private:
    std::string name_;
    PartialAssignment pre_;
    PartialAssignment eff_;
};

using ActionMap = std::map<std::string, Action, std::less<>>;

class ActionModel {
public:
    ActionModel() = default;
    ActionModel(Variables variables, std::vector<Action> actions);

    const Variables &variables() const {
        return variables_;
    }
    // Sorted by name.
    const ActionMap &actions() const {
        return actions_;
    }
    const Action *find(std::string_view name) const;
    const Action &at(std::string_view name) const;

    std::size_t num_actions() const {
        return actions_.size();
    }

    // Throws ValidationError on a duplicate name or a fact outside the
    // declared variables.
    void add(Action action);

    bool operator==(const ActionModel &) const = default;

private:
    Variables variables_;
    ActionMap actions_;
};

struct Problem {
    ActionModel model;
    State init;
    PartialAssignment goal;

    Problem() = default;
    Problem(ActionModel model, State init, PartialAssignment goal);
};

struct Plan {
    std::vector<std::string> steps;

    std::size_t size() const {
        return steps.size();
    }
    bool operator==(const Plan &) const = default;
};

bool is_applicable(const State &s, const Action &a);
State apply(const State &s, const Action &a);
bool satisfies_goal(const State &s, const PartialAssignment &goal);

enum class PlanFailure { none, inapplicable, goal_unsatisfied };

struct ValidationReport {
    bool success = false;
    std::vector<State> states;
    std::optional<std::size_t> failing_step;
    PlanFailure reason = PlanFailure::none;
};

// Unknown step names throw ResolutionError; an inapplicable step or an unmet
// goal is reported, not thrown.
ValidationReport validate_plan(const Plan &plan, const Problem &prob);

const char *to_string(PlanFailure f);

// An alternating state/action sequence s_0 a_0 s_1 ... a_{n-1} s_n.
struct Trajectory {
    std::string id;
    std::vector<State> states;
    std::vector<std::string> actions;
    std::optional<PartialAssignment> goal;

    std::size_t length() const {
        return actions.size();
    }
    bool operator==(const Trajectory &) const = default;
};

// Checks |states| = |actions| + 1 (StructureError) and that each state is
// total over vars (ValidationError).
void check_trajectory(const Variables &vars, const Trajectory &t);

// Checks every step against the model: a_i applicable in s_i and
// apply(s_i, a_i) = s_{i+1}. Throws ConsistencyError naming the step.
void check_trajectory_consistent(const ActionModel &model, const Trajectory &t);

// Human-readable rendering, e.g. "{TruckAt=A, PackageAt=B}".
std::string describe(const Variables &vars, const PartialAssignment &pa);
std::string describe(const Variables &vars, const State &s);

} // namespace safeplan
