#pragma once

#include "safeplan/sas.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace safeplan {

struct ActionTriplet {
    State pre_state;
    std::string action;
    State post_state;

    bool operator==(const ActionTriplet &) const = default;
};

using TripletMap = std::map<std::string, std::vector<ActionTriplet>, std::less<>>;

// Splits every trajectory into its <s_i, a_i, s_{i+1}> steps, grouped by
// action name. Repeated identical triplets are kept.
TripletMap extract_triplets(std::span<const Trajectory> trajs);

/*
  Conservative bounds for one observed action:
    pre_upper  - facts shared by every observed pre-state
    eff_lower  - facts whose value changed in at least one observation
    eff_upper  - facts shared by every observed post-state (reporting only;
                 the compiled model never uses it)
*/
struct LearnedAction {
    std::string name;
    PartialAssignment pre_upper;
    PartialAssignment eff_lower;
    PartialAssignment eff_upper;
    std::size_t observations = 0;

    bool operator==(const LearnedAction &) const = default;
};

struct LearnedModel {
    Variables variables;
    std::map<std::string, LearnedAction, std::less<>> actions;

    bool operator==(const LearnedModel &) const = default;
};

/*
  Incremental form of learn(). Adding observations only ever shrinks
  pre_upper and grows eff_lower, and the result does not depend on the order
  of observations.
*/
class BoundsLearner {
public:
    explicit BoundsLearner(Variables vars);

    void observe(const ActionTriplet &t);
    void observe(const Trajectory &t);

    const LearnedModel &model() const {
        return model_;
    }

private:
    LearnedModel model_;
};

// Throws ModelInconsistencyError if two observations of one action change a
// variable to different values.
LearnedModel learn(std::span<const Trajectory> trajs, const Variables &vars);

ActionModel learned_to_model(const LearnedModel &lm);

} // namespace safeplan
