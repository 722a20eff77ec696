#include "safeplan/safety_audit.hpp"

#include "safeplan/errors.hpp"
#include "safeplan/rng.hpp"

namespace safeplan {

const char *to_string(ViolationKind k) {
    switch (k) {
    case ViolationKind::inapplicable_under_truth:
        return "inapplicable-under-truth";
    case ViolationKind::state_mismatch:
        return "state-mismatch";
    }
    return "unknown";
}

const char *to_string(BoundKind k) {
    switch (k) {
    case BoundKind::pre_not_in_upper:
        return "pre-not-in-upper";
    case BoundKind::eff_lower_not_in_eff:
        return "eff-lower-not-in-eff";
    case BoundKind::eff_not_in_post:
        return "eff-not-in-post";
    }
    return "unknown";
}

namespace {

std::optional<ViolationKind> check_one(const State &s, const Action &learned, const Action *truth) {
    if (!is_applicable(s, learned))
        return std::nullopt;
    if (!truth || !is_applicable(s, *truth))
        return ViolationKind::inapplicable_under_truth;
    if (apply(s, learned) != apply(s, *truth))
        return ViolationKind::state_mismatch;
    return std::nullopt;
}

// Returns the first violation in action-name order for state s.
std::optional<SafetyCounterexample> check_state_all(const State &s, const ActionModel &learned,
                                                    const ActionModel &truth) {
    for (const auto &[name, a] : learned.actions()) {
        if (auto kind = check_one(s, a, truth.find(name)))
            return SafetyCounterexample{s, name, *kind};
    }
    return std::nullopt;
}

State state_from_index(const Variables &vars, std::size_t index) {
    std::vector<ValueId> values(vars.size());
    for (std::size_t i = vars.size(); i-- > 0;) {
        auto d = static_cast<std::size_t>(vars[i].domain_size());
        values[i] = static_cast<ValueId>(index % d);
        index /= d;
    }
    return State(std::move(values));
}

} // namespace

SafetyReport audit_safety(const ActionModel &learned, const ActionModel &truth,
                          const AuditMode &mode) {
    if (learned.variables() != truth.variables())
        throw ValidationError("learned and ground-truth models declare different variables");
    const Variables &vars = truth.variables();

    SafetyReport report;
    report.mode = mode;
    if (mode.kind == AuditMode::Kind::exhaustive) {
        const std::size_t total = state_space_size(vars);
        if (total > mode.state_cap)
            throw StateCapError("state space has " + std::to_string(total) +
                                " states, above the exhaustive cap of " +
                                std::to_string(mode.state_cap) + "; use sampled mode");
        for (std::size_t i = 0; i < total; ++i) {
            State s = state_from_index(vars, i);
            ++report.states_checked;
            if (auto cx = check_state_all(s, learned, truth)) {
                report.safe = false;
                report.counterexample = std::move(cx);
                return report;
            }
        }
        return report;
    }

    RngStream rng(mode.seed);
    std::vector<ValueId> values(vars.size());
    for (std::size_t n = 0; n < mode.samples; ++n) {
        for (std::size_t i = 0; i < vars.size(); ++i)
            values[i] = static_cast<ValueId>(
                rng.uniform_below(static_cast<std::uint64_t>(vars[i].domain_size())));
        State s(values);
        ++report.states_checked;
        if (auto cx = check_state_all(s, learned, truth)) {
            report.safe = false;
            report.counterexample = std::move(cx);
            return report;
        }
    }
    return report;
}

bool verify_counterexample(const ActionModel &learned, const ActionModel &truth,
                           const SafetyCounterexample &cx) {
    const Action *la = learned.find(cx.action);
    if (!la)
        return false;
    auto kind = check_one(cx.state, *la, truth.find(cx.action));
    return kind && *kind == cx.kind;
}

BoundsReport audit_bounds(const LearnedModel &lm, const ActionModel &truth,
                          std::span<const Trajectory> trajs) {
    BoundsReport report;
    const TripletMap triplets = extract_triplets(trajs);
    for (const auto &[name, la] : lm.actions) {
        const Action *ta = truth.find(name);
        if (!ta)
            continue;
        ++report.actions_checked;
        for (const Fact &f : ta->pre()) {
            if (!la.pre_upper.contains(f))
                report.violations.push_back({name, BoundKind::pre_not_in_upper, f});
        }
        for (const Fact &f : la.eff_lower) {
            if (!ta->eff().contains(f))
                report.violations.push_back({name, BoundKind::eff_lower_not_in_eff, f});
        }
        auto it = triplets.find(name);
        if (it == triplets.end())
            continue;
        for (const Fact &f : ta->eff()) {
            for (const ActionTriplet &t : it->second) {
                if (t.post_state[f.var] != f.value) {
                    report.violations.push_back({name, BoundKind::eff_not_in_post, f});
                    break;
                }
            }
        }
    }
    return report;
}

} // namespace safeplan
