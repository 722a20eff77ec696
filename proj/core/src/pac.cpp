#include "safeplan/pac.hpp"

#include "safeplan/errors.hpp"

#include <cmath>
#include <string>

namespace safeplan {

void check_pac_params(const PacParams &p) {
    if (p.d < 2)
        throw ValidationError("d must be at least 2");
    if (p.num_actions < 1)
        throw ValidationError("number of actions must be at least 1");
    if (p.num_vars < 1)
        throw ValidationError("number of variables must be at least 1");
    if (!(p.epsilon > 0.0 && p.epsilon <= 1.0))
        throw ValidationError("epsilon must be in (0, 1]");
    if (!(p.delta > 0.0 && p.delta < 1.0))
        throw ValidationError("delta must be in (0, 1)");
}

SampleBound sample_complexity(const PacParams &p) {
    check_pac_params(p);
    const long double actions = static_cast<long double>(p.num_actions);
    const long double leading = 2.0L * std::log(static_cast<long double>(p.d)) * actions;
    const long double inner = static_cast<long double>(p.num_vars) +
                              std::log2(2.0L * actions / static_cast<long double>(p.delta));
    SampleBound b;
    b.real = leading / static_cast<long double>(p.epsilon) * inner;
    b.m = static_cast<std::uint64_t>(std::ceil(b.real));
    return b;
}

namespace {
void check_unit(double x, const char *name) {
    if (!(x >= 0.0 && x <= 1.0))
        throw ValidationError(std::string(name) + " must be in [0, 1]");
}
} // namespace

SolvabilityTable solvability_table(double mu, double epsilon) {
    check_unit(mu, "mu");
    check_unit(epsilon, "epsilon");
    SolvabilityTable t;
    t.mu = mu;
    t.epsilon = epsilon;
    t.plan_given_solvable = 1.0 - epsilon;
    t.no_plan_given_solvable = epsilon;
    t.plan_given_unsolvable = 0.0;
    t.no_plan_given_unsolvable = 1.0;
    t.p_plan = mu * (1.0 - epsilon);
    t.p_no_plan = 1.0 - t.p_plan;
    return t;
}

double prob_solvable_given_no_plan(double epsilon, double mu) {
    const long double e = epsilon;
    const long double m = mu;
    const long double denom = 1.0L - (1.0L - e) * m;
    if (denom == 0.0L)
        throw DomainError("P(no plan) is zero");
    return static_cast<double>(e * m / denom);
}

namespace {
void check_gamma_mu(double gamma, double mu) {
    if (!(gamma > 0.0))
        throw ValidationError("gamma must be positive");
    if (!(mu >= 0.0 && mu <= 1.0))
        throw ValidationError("mu must be in [0, 1]");
    if (mu == 0.0)
        throw DomainError("epsilon is undefined for mu = 0 (division by zero)");
}
} // namespace

double epsilon_for_gamma(double gamma, double mu) {
    check_gamma_mu(gamma, mu);
    if (gamma >= 1.0)
        throw DomainError("gamma must be below 1; any epsilon satisfies gamma >= 1");
    const long double g = gamma;
    const long double m = mu;
    return static_cast<double>(g * (1.0L - m) / (m * (1.0L - g)));
}

double epsilon_for_gamma_conservative(double gamma, double mu) {
    check_gamma_mu(gamma, mu);
    const long double g = gamma;
    const long double m = mu;
    return static_cast<double>(g * (1.0L - m) / (m * (1.0L + g)));
}

} // namespace safeplan
