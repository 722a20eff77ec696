// Acceptance harness: one PASS/FAIL line per criterion, exit status 0 only
// if every criterion passes.

#include "fixtures.hpp"

#include "safeplan/safeplan.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace safeplan;
using namespace safeplan::testing;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

unsigned worker_count() {
    return std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
}

// One randomized soundness case: its truth, training corpus, learned model
// and a single evaluation draw.
struct Case {
    LogisticsConfig cfg;
    ActionModel truth;
    std::vector<Trajectory> corpus;
    LearnedModel learned;
    InstanceTriple instance;
};

std::vector<Case> make_cases(std::size_t n) {
    std::vector<Case> cases(n);
    const RngStream master(20261019);
    for (std::size_t i = 0; i < n; ++i) {
        RngStream rng = master.derive(i);
        Case &c = cases[i];
        c.cfg = {static_cast<int>(rng.uniform_int(2, 5)), static_cast<int>(rng.uniform_int(1, 2)),
                 static_cast<int>(rng.uniform_int(1, 2)), i};
        c.truth = gen_logistics(c.cfg);
        DistConfig train;
        train.mode = static_cast<TrajectoryMode>(rng.uniform_below(3));
        train.goal_density = 0.2 + 0.8 * rng.uniform01();
        c.corpus = sample_corpus(c.truth, train, rng.uniform_below(40), rng.derive(1));
        c.learned = learn(c.corpus, c.truth.variables());
        DistConfig eval;
        eval.solvable_only = false;
        eval.goal_source = rng.bernoulli(0.5) ? GoalSource::reachable : GoalSource::uniform;
        RngStream er = rng.derive(2);
        c.instance = sample_instance(c.truth, eval, er);
    }
    return cases;
}

const std::vector<Case> &cases() {
    static const std::vector<Case> all = make_cases(1000);
    return all;
}

Outcome soundness() {
    std::size_t plans = 0, failures = 0;
    for (const Case &c : cases()) {
        const CompiledProblem cp = compile(c.learned, c.instance.init, c.instance.goal);
        const SearchResult r = solve(cp.problem);
        if (!r.solved())
            continue;
        ++plans;
        if (!validate_plan(r.plan, Problem(c.truth, c.instance.init, c.instance.goal)).success)
            ++failures;
    }
    std::ostringstream d;
    d << cases().size() << " cases, " << plans << " plans returned, " << failures << " invalid";
    return {failures == 0 && plans > 0, d.str()};
}

Outcome safety() {
    std::size_t audited = 0, unsafe = 0;
    std::size_t mutations = 0, caught = 0;
    for (const Case &c : cases()) {
        if (state_space_size(c.truth.variables()) > 50'000)
            continue;
        const ActionModel learned = learned_to_model(c.learned);
        if (!audit_safety(learned, c.truth).safe)
            ++unsafe;
        ++audited;

        if (mutations >= 100)
            continue;
        // Drop one learned precondition entry that the truth also requires.
        for (const auto &[name, a] : learned.actions()) {
            const Action &ta = c.truth.at(name);
            if (ta.pre().empty())
                continue;
            const Fact f = *ta.pre().begin();
            PartialAssignment pre = a.pre();
            pre.erase(f.var);
            // Witness: the learned precondition with f's variable moved off f's value.
            State witness(std::vector<ValueId>(c.truth.variables().size(), 0));
            for (const Fact &p : pre)
                witness.set(p.var, p.value);
            witness.set(f.var, f.value == 0 ? 1 : 0);
            if (!satisfies_goal(witness, pre))
                continue;

            std::vector<Action> acts;
            for (const auto &[n2, a2] : learned.actions())
                acts.push_back(n2 == name ? Action(name, pre, a2.eff()) : a2);
            const ActionModel mutated(c.truth.variables(), acts);
            ++mutations;
            const SafetyReport r = audit_safety(mutated, c.truth);
            if (!r.safe && r.counterexample && verify_counterexample(mutated, c.truth, *r.counterexample))
                ++caught;
            break;
        }
    }
    std::ostringstream d;
    d << audited << " learned models audited, " << unsafe << " unsafe; " << caught << "/" << mutations
      << " mutations caught";
    return {audited >= 100 && unsafe == 0 && mutations == 100 && caught == 100, d.str()};
}

Outcome bound_containment() {
    std::size_t violations = 0, actions = 0;
    for (const Case &c : cases()) {
        const BoundsReport r = audit_bounds(c.learned, c.truth, c.corpus);
        violations += r.violations.size();
        actions += r.actions_checked;
    }
    std::ostringstream d;
    d << actions << " learned actions checked, " << violations << " violations";
    return {violations == 0, d.str()};
}

Outcome replay() {
    std::size_t trajectories = 0, failures = 0;
    for (const Case &c : cases()) {
        const ActionModel learned = learned_to_model(c.learned);
        for (const Trajectory &t : c.corpus) {
            ++trajectories;
            const Problem p(learned, t.states.front(), t.states.back().as_assignment());
            const ValidationReport r = validate_plan(Plan{t.actions}, p);
            if (!r.success || r.states != t.states)
                ++failures;
        }
    }
    std::ostringstream d;
    d << trajectories << " trajectories replayed, " << failures << " failures";
    return {failures == 0 && trajectories > 0, d.str()};
}

Outcome formula() {
    const SampleBound b = sample_complexity({4, 12, 2, 0.1, 0.05});
    bool ok = b.m == 3629;
    RngStream rng(555);
    int exact = 0;
    for (int i = 0; i < 50; ++i) {
        PacParams p{static_cast<int>(rng.uniform_int(2, 20)), rng.uniform_int(1, 1000), rng.uniform_int(1, 100),
                    0.001 + 0.999 * rng.uniform01(), 0.001 + 0.998 * rng.uniform01()};
        PacParams half = p;
        half.epsilon = p.epsilon / 2;
        const SampleBound full = sample_complexity(p), halved = sample_complexity(half);
        const BigFloat ref = pac_bound_oracle(p.d, p.num_actions, p.num_vars, p.epsilon, p.delta);
        const BigFloat ref_half = pac_bound_oracle(half.d, half.num_actions, half.num_vars, half.epsilon, half.delta);
        const bool scaled = halved.real == 2 * full.real;
        const bool matches =
            full.m == static_cast<std::uint64_t>(boost::multiprecision::ceil(ref)) &&
            halved.m == static_cast<std::uint64_t>(boost::multiprecision::ceil(ref_half)) &&
            boost::multiprecision::abs(BigFloat(full.real) - ref) / ref < BigFloat(1e-15);
        exact += scaled && matches;
    }
    ok = ok && exact == 50;
    char buf[128];
    std::snprintf(buf, sizeof buf, "m=%llu (real %.6Lf); halving exact and oracle-matched in %d/50",
                  static_cast<unsigned long long>(b.m), b.real, exact);
    return {ok, buf};
}

Outcome empirical_pac() {
    ExperimentConfig cfg;
    cfg.m_values = {1186};
    cfg.runs = 20;
    cfg.eval_instances = 200;
    cfg.epsilon = 0.25;
    cfg.delta = 0.2;
    cfg.seed = 6;
    cfg.jobs = worker_count();
    const auto records = run_experiment(cfg);
    const PacVerdict v = check_pac_claim(records, {4, 12, 2, 0.25, 0.2});
    std::ostringstream d;
    d << "required m=" << v.required_m << ", " << v.runs_within_epsilon << "/" << v.runs
      << " runs within epsilon, max failure rate " << v.max_failure_rate << ", unsafe plans "
      << v.unsafe_plans;
    return {v.applicable && v.required_m == 1186 && v.fraction_within >= 0.75 && v.unsafe_plans == 0,
            d.str()};
}

Outcome monotonicity() {
    ExperimentConfig cfg;
    cfg.m_values = {1, 5, 20, 100, 1186};
    cfg.runs = 10;
    cfg.eval_instances = 200;
    cfg.seed = 7;
    cfg.jobs = worker_count();
    const auto records = run_experiment(cfg);
    const auto means = mean_solve_rate_by_m(records);
    bool ok = means.size() == 5;
    std::ostringstream d;
    d << "mean solve_rate:";
    for (std::size_t i = 0; i < means.size(); ++i) {
        d << " m=" << means[i].first << ":" << means[i].second;
        if (i > 0 && means[i].second + 0.02 < means[i - 1].second)
            ok = false;
    }
    return {ok, d.str()};
}

Outcome planner_cross_check() {
    RngStream rng(8080);
    std::size_t instances = 0, agree = 0, no_plans = 0, no_plan_ok = 0;
    while (instances < 200) {
        ActionModel m;
        if (rng.bernoulli(0.5)) {
            m = random_sas_model(rng, static_cast<int>(rng.uniform_int(2, 6)), 5,
                                 static_cast<int>(rng.uniform_int(1, 12)));
        } else {
            m = gen_logistics({static_cast<int>(rng.uniform_int(2, 5)), static_cast<int>(rng.uniform_int(1, 2)),
                               static_cast<int>(rng.uniform_int(1, 2)), 0});
            // Thin the action set so some instances become unsolvable.
            std::vector<Action> kept;
            for (const auto &[name, a] : m.actions())
                if (rng.bernoulli(0.7))
                    kept.push_back(a);
            m = ActionModel(m.variables(), kept);
        }
        const State init = random_state(m.variables(), rng);
        const auto reachable = brute_force_reachable(m, init);
        if (reachable.size() > 10'000)
            continue;
        ++instances;
        const Problem p(m, init, random_partial(m.variables(), rng, 0.5));
        const SearchResult a = solve(p);
        const SearchResult b = solve_bfs(p);
        if (a.outcome == b.outcome && a.plan.size() == b.plan.size() &&
            (!a.solved() || (validate_plan(a.plan, p).success && validate_plan(b.plan, p).success)))
            ++agree;
        if (a.outcome == SearchOutcome::no_plan) {
            ++no_plans;
            bool any_goal = false;
            for (const State &s : reachable)
                any_goal |= satisfies_goal(s, p.goal);
            no_plan_ok += !any_goal;
        }
    }
    std::ostringstream d;
    d << agree << "/" << instances << " agree; " << no_plan_ok << "/" << no_plans
      << " no_plan answers confirmed by enumeration";
    return {agree == instances && no_plans > 0 && no_plan_ok == no_plans, d.str()};
}

Outcome calculator() {
    RngStream rng(99);
    std::size_t table_ok = 0, gamma_ok = 0;
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        const double mu = rng.uniform01(), eps = rng.uniform01();
        const SolvabilityTable t = solvability_table(mu, eps);
        const double tol = 4 * std::numeric_limits<double>::epsilon();
        table_ok += std::fabs(t.plan_given_solvable + t.no_plan_given_solvable - 1) <= tol &&
                    std::fabs(t.plan_given_unsolvable + t.no_plan_given_unsolvable - 1) <= tol &&
                    std::fabs(t.p_plan - mu * (1 - eps)) <= tol && std::fabs(t.p_plan + t.p_no_plan - 1) <= tol;
    }
    for (int i = 0; i < 1000; ++i) {
        double gamma = rng.uniform01(), mu = rng.uniform01();
        if (gamma == 0 || mu == 0)
            continue;
        const double back = prob_solvable_given_no_plan(epsilon_for_gamma(gamma, mu), mu);
        const double ulps = std::fabs(back - gamma) / (std::numeric_limits<double>::epsilon() * gamma);
        worst = std::max(worst, ulps);
        gamma_ok += ulps <= 4;
    }
    std::ostringstream d;
    d << table_ok << "/1000 tables consistent; " << gamma_ok << "/1000 gamma round trips, worst " << worst
      << " ulp";
    return {table_ok == 1000 && gamma_ok == 1000, d.str()};
}

Outcome logistics_example() {
    const Variables vars = logistics_3loc().variables();
    const LearnedModel only_t1 = learn(std::vector<Trajectory>{t1()}, vars);
    const LearnedModel both = learn(std::vector<Trajectory>{t1(), t_move_ab_package_at_a()}, vars);
    const PartialAssignment &restrictive = only_t1.actions.at("Move_A_B").pre_upper;
    const PartialAssignment &shrunk = both.actions.at("Move_A_B").pre_upper;
    const bool ok = restrictive == PartialAssignment{{TruckAt, A}, {PackageAt, B}} &&
                    shrunk == PartialAssignment{{TruckAt, A}};
    return {ok, "T1 alone: " + describe(vars, restrictive) + "; with second trajectory: " + describe(vars, shrunk)};
}

// The library-level pipeline behind the CLI: sample, learn, compile, export,
// and a small experiment. Returns the bytes of every artifact.
std::vector<std::string> pipeline_artifacts(std::uint64_t seed) {
    const ActionModel truth = gen_logistics({4, 2, 1, seed});
    DistConfig dist;
    dist.mode = TrajectoryMode::random_optimal;
    const auto corpus = sample_corpus(truth, dist, 50, RngStream(seed));
    const LearnedModel lm = learn(corpus, truth.variables());
    RngStream r(seed + 1);
    const InstanceTriple inst = sample_instance(truth, dist, r);
    const CompiledProblem cp = compile(lm, inst.init, inst.goal);
    const SearchResult plan = solve(cp.problem);

    ExperimentConfig cfg;
    cfg.m_values = {1, 10, 50};
    cfg.runs = 4;
    cfg.eval_instances = 50;
    cfg.seed = seed;
    cfg.jobs = worker_count();
    cfg.train_dist.mode = TrajectoryMode::walk_then_plan;
    const auto records = run_experiment(cfg);

    return {serialize_trajectories(corpus, truth.variables()), serialize_learned_model(lm),
            serialize_problem(cp.problem, cp.provenance), write_sas(cp.problem),
            serialize_plan(plan.plan), write_results_csv(records)};
}

Outcome determinism() {
    const auto first = pipeline_artifacts(31337);
    const auto second = pipeline_artifacts(31337);
    const auto other = pipeline_artifacts(31338);
    std::size_t bytes = 0;
    for (const auto &s : first)
        bytes += s.size();
    const bool same = first == second;
    const bool differs = first[0] != other[0] && first[5] != other[5];
    std::ostringstream d;
    d << first.size() << " artifacts (" << bytes << " bytes incl. .sas and CSV) "
      << (same ? "identical" : "DIFFER") << " across two executions; a different seed "
      << (differs ? "changes them" : "does NOT change them");
    return {same && differs, d.str()};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 soundness", soundness},
        {"2 safety", safety},
        {"3 bound containment", bound_containment},
        {"4 replay guarantee", replay},
        {"5 formula exactness", formula},
        {"6 empirical PAC", empirical_pac},
        {"7 monotonicity", monotonicity},
        {"8 planner cross-check", planner_cross_check},
        {"9 calculator identities", calculator},
        {"10 logistics example reconstruction", logistics_example},
        {"11 determinism", determinism},
    };
    int failed = 0;
    for (const auto &[name, check] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        char t[32];
        std::snprintf(t, sizeof t, "%.1fs", secs);
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << ": " << o.detail << " (" << t << ")"
                  << std::endl;
        failed += !o.pass;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
