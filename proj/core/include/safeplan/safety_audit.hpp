#pragma once

#include "safeplan/learner.hpp"
#include "safeplan/sas.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace safeplan {

struct AuditMode {
    enum class Kind { exhaustive, sampled };

    Kind kind = Kind::exhaustive;
    std::size_t state_cap = 50'000;   // exhaustive only
    std::size_t samples = 0;          // sampled only
    std::uint64_t seed = 0;           // sampled only

    static AuditMode exhaustive(std::size_t cap = 50'000) {
        return {Kind::exhaustive, cap, 0, 0};
    }
    static AuditMode sampled(std::size_t samples, std::uint64_t seed) {
        return {Kind::sampled, 0, samples, seed};
    }
};

enum class ViolationKind { inapplicable_under_truth, state_mismatch };

const char *to_string(ViolationKind k);

struct SafetyCounterexample {
    State state;
    std::string action;
    ViolationKind kind = ViolationKind::inapplicable_under_truth;
};

struct SafetyReport {
    bool safe = true;
    std::size_t states_checked = 0;
    AuditMode mode;
    std::optional<SafetyCounterexample> counterexample;
};

/*
  Checks that `learned` is safe with respect to `truth`: for every state s and
  every learned action a applicable in s, a is applicable under the truth and
  both models produce the same successor. A learned action that the truth
  does not define counts as inapplicable under the truth.

  Exhaustive mode walks all states in mixed-radix order (variable 0 is the
  most significant digit) and reports the lowest-index violation. Sampled mode
  draws states uniformly from the full assignment space.

  Throws ValidationError if the variable sets differ and StateCapError if
  exhaustive mode would exceed the cap.
*/
SafetyReport audit_safety(const ActionModel &learned, const ActionModel &truth,
                          const AuditMode &mode = AuditMode::exhaustive());

// True if the counterexample reproduces when replayed through is_applicable /
// apply on both models.
bool verify_counterexample(const ActionModel &learned, const ActionModel &truth,
                           const SafetyCounterexample &cx);

enum class BoundKind {
    pre_not_in_upper,      // a true precondition is missing from pre_upper
    eff_lower_not_in_eff,  // eff_lower asserts an effect the truth lacks
    eff_not_in_post,       // a true effect disagrees with some post-state
};

const char *to_string(BoundKind k);

struct BoundViolation {
    std::string action;
    BoundKind kind;
    Fact fact;
};

struct BoundsReport {
    std::size_t actions_checked = 0;
    std::vector<BoundViolation> violations;

    bool clean() const {
        return violations.empty();
    }
};

// Verifies pre(a) <= pre_upper(a), eff_lower(a) <= eff(a) and
// eff(a) <= intersection of post-states for every observed action. The post-
// state intersection is recomputed from `trajs`. Actions the truth does not
// define are skipped.
BoundsReport audit_bounds(const LearnedModel &lm, const ActionModel &truth,
                          std::span<const Trajectory> trajs);

} // namespace safeplan
