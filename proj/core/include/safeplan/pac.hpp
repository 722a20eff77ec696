#pragma once

#include <cstdint>

namespace safeplan {

struct PacParams {
    int d = 2;               // largest domain size, >= 2
    long long num_actions = 1;
    long long num_vars = 1;
    double epsilon = 0.1;    // (0, 1]
    double delta = 0.05;     // (0, 1)
};

// Throws ValidationError when a field is out of range.
void check_pac_params(const PacParams &p);

struct SampleBound {
    long double real = 0;  // value of the bound before rounding up
    std::uint64_t m = 0;   // least integer >= real
};

/*
  Number of trajectories sufficient for the conservative planner:

      m >= (2 ln d) |A| / eps * ( |X| + log2(2|A| / delta) )

  Note the mixed bases: the leading factor is a natural log, the inner one
  base 2. Evaluated in long double; epsilon appears exactly once as a divisor
  so halving it doubles `real` exactly.
*/
SampleBound sample_complexity(const PacParams &p);

struct SolvabilityTable {
    double mu = 0;
    double epsilon = 0;
    // Conditionals: rows are solvable / unsolvable, columns plan / no plan.
    double plan_given_solvable = 0;
    double no_plan_given_solvable = 0;
    double plan_given_unsolvable = 0;
    double no_plan_given_unsolvable = 0;
    double p_plan = 0;
    double p_no_plan = 0;
};

// mu, epsilon in [0, 1]; otherwise ValidationError.
SolvabilityTable solvability_table(double mu, double epsilon);

// P(solvable | no plan) = eps*mu / (1 - (1 - eps)*mu).
double prob_solvable_given_no_plan(double epsilon, double mu);

/*
  Largest epsilon for which P(solvable | no plan) <= gamma, i.e. the exact
  inverse of prob_solvable_given_no_plan:

      eps = gamma (1 - mu) / (mu (1 - gamma))

  gamma in (0, 1), mu in (0, 1]. mu = 0 throws DomainError. A result >= 1
  means every epsilon meets the bound.
*/
double epsilon_for_gamma(double gamma, double mu);

// The often-quoted form gamma (1 - mu) / (mu (1 + gamma)). It is sufficient
// but not tight: plugging it back yields gamma / (1 + 2 gamma).
double epsilon_for_gamma_conservative(double gamma, double mu);

} // namespace safeplan
