#pragma once

#include "safeplan/learner.hpp"
#include "safeplan/sas.hpp"

#include <string>

namespace safeplan {

// Classical problem built from a learned model: same variables, start state
// and goal; actions are exactly the observed ones with pre = pre_upper and
// eff = eff_lower.
struct CompiledProblem {
    Problem problem;
    std::string provenance;
};

// Throws ValidationError if init/goal do not fit the learned variables.
CompiledProblem compile(const LearnedModel &lm, const State &init, const PartialAssignment &goal,
                        std::string provenance = {});

// FNV-1a digest of a learned model's bounds, rendered as 16 hex digits.
std::string model_fingerprint(const LearnedModel &lm);

} // namespace safeplan
