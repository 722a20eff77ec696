#include "cli.hpp"

#include "safeplan/safeplan.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace safeplan::cli {

namespace {

void emit(const std::string &path, const std::string &contents) {
    if (path.empty() || path == "-") {
        std::cout << contents;
        std::cout.flush();
    } else {
        write_file_atomic(path, contents);
    }
}

std::string fmt(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

// "Var=Value, Var=Value" by name.
PartialAssignment parse_assignment_text(const Variables &vars, const std::string &text) {
    PartialAssignment pa;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty())
            continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ValidationError("expected Var=Value, got '" + item + "'");
        const std::string var = trim(item.substr(0, eq));
        const std::string val = trim(item.substr(eq + 1));
        const auto v = find_variable(vars, var);
        if (!v)
            throw ValidationError("unknown variable '" + var + "'");
        const auto x = find_value(vars[static_cast<std::size_t>(*v)], val);
        if (!x)
            throw ValidationError("unknown value '" + val + "' for variable '" + var + "'");
        if (pa.has_var(*v))
            throw ValidationError("variable '" + var + "' assigned twice");
        pa.set(*v, *x);
    }
    return pa;
}

State parse_state_text(const Variables &vars, const std::string &text) {
    const PartialAssignment pa = parse_assignment_text(vars, text);
    if (pa.size() != vars.size())
        throw ValidationError("a state must assign every variable: '" + text + "'");
    std::vector<ValueId> values(vars.size());
    for (const Fact &f : pa)
        values[static_cast<std::size_t>(f.var)] = f.value;
    return State(std::move(values));
}

void add_limits(CLI::App *cmd, SearchLimits &limits) {
    cmd->add_option("--max-generated", limits.max_generated, "Generated-state limit")
        ->capture_default_str();
    cmd->add_option("--max-seconds", limits.max_seconds, "Wall-clock limit in seconds")
        ->capture_default_str();
}

void add_dist(CLI::App *cmd, DistConfig &dist, std::string &mode, std::string &goal_source,
              const std::string &prefix) {
    cmd->add_option("--" + prefix + "mode", mode, "Trajectory producer: optimal, random-optimal, walk")
        ->capture_default_str();
    cmd->add_option("--" + prefix + "goal-density", dist.goal_density, "Probability a variable is in the goal")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--" + prefix + "goal-source", goal_source, "Goal values: reachable or uniform")
        ->capture_default_str();
    cmd->add_option("--" + prefix + "walk-max", dist.walk_max, "Longest random walk in walk mode")
        ->capture_default_str();
    cmd->add_option("--" + prefix + "max-rejections", dist.max_rejections,
                    "Unsolvable draws tolerated per instance")
        ->capture_default_str();
    cmd->add_option("--" + prefix + "producer-max-length", dist.producer_max_length,
                    "Producer gives up on longer optimal plans (0 = never)")
        ->capture_default_str();
}

void finish_dist(DistConfig &dist, const std::string &mode, const std::string &goal_source) {
    dist.mode = trajectory_mode_from_string(mode);
    dist.goal_source = goal_source_from_string(goal_source);
}

// ---------------------------------------------------------------- commands

struct GenDomainOpts {
    LogisticsConfig cfg;
    std::string out, init, goal, problem_out, vars_out;
};

int cmd_gen_domain(const GenDomainOpts &o) {
    if (o.cfg.num_locations < 2 || o.cfg.num_trucks < 1 || o.cfg.num_packages < 1)
        throw ValidationError("need at least 2 locations, 1 truck and 1 package");
    const ActionModel m = gen_logistics(o.cfg);
    emit(o.out, serialize_domain(m));
    if (!o.vars_out.empty())
        write_file_atomic(o.vars_out, serialize_variables(m.variables()));
    if (!o.problem_out.empty()) {
        if (o.init.empty())
            throw ValidationError("--problem-out needs --init");
        const Problem p(m, parse_state_text(m.variables(), o.init),
                        parse_assignment_text(m.variables(), o.goal));
        write_file_atomic(o.problem_out, serialize_problem(p, "ground-truth"));
    }
    std::cerr << "domain: " << m.variables().size() << " variables, " << m.num_actions()
              << " actions\n";
    return exit_ok;
}

struct SampleOpts {
    std::string domain, out, prefix = "t";
    std::size_t count = 0;
    std::uint64_t seed = 0;
    DistConfig dist;
    std::string mode = "optimal", goal_source = "reachable";
};

int cmd_sample(SampleOpts o) {
    finish_dist(o.dist, o.mode, o.goal_source);
    const ActionModel truth = parse_domain(read_file(o.domain));
    if (truth.num_actions() == 0)
        throw ValidationError("the domain has no actions");
    o.dist.solvable_only = true;
    const auto corpus = sample_corpus(truth, o.dist, o.count, RngStream(o.seed), o.prefix);
    emit(o.out, serialize_trajectories(corpus, truth.variables()));
    std::size_t steps = 0;
    for (const Trajectory &t : corpus)
        steps += t.length();
    std::cerr << "sampled " << corpus.size() << " trajectories, " << steps << " steps (seed " << o.seed
              << ")\n";
    return exit_ok;
}

struct LearnOpts {
    std::string trajectories, vars, out, check_against;
};

int cmd_learn(const LearnOpts &o) {
    const Variables vars = parse_variables(read_file(o.vars));
    std::optional<ActionModel> ref;
    if (!o.check_against.empty()) {
        ref = parse_domain(read_file(o.check_against));
        if (ref->variables() != vars)
            throw ValidationError("--check-against domain has different variables");
    }
    const auto trajs = parse_trajectories(read_file(o.trajectories), vars, ref ? &*ref : nullptr);
    const LearnedModel lm = learn(trajs, vars);
    emit(o.out, serialize_learned_model(lm));
    std::cerr << "learned " << lm.actions.size() << " actions from " << trajs.size()
              << " trajectories\n";
    return exit_ok;
}

struct CompileOpts {
    std::string model, problem, init, goal, out, sas_out, provenance;
};

int cmd_compile(const CompileOpts &o) {
    const LearnedModel lm = parse_learned_model(read_file(o.model));
    State init;
    PartialAssignment goal;
    if (!o.problem.empty()) {
        if (!o.init.empty() || !o.goal.empty())
            throw ValidationError("use either --problem or --init/--goal, not both");
        const ProblemFile pf = parse_problem(read_file(o.problem));
        if (pf.problem.model.variables() != lm.variables)
            throw ValidationError("problem and learned model have different variables");
        init = pf.problem.init;
        goal = pf.problem.goal;
    } else {
        if (o.init.empty())
            throw ValidationError("compile needs --problem or --init");
        init = parse_state_text(lm.variables, o.init);
        goal = parse_assignment_text(lm.variables, o.goal);
    }
    const CompiledProblem cp = compile(lm, init, goal, o.provenance);
    emit(o.out, serialize_problem(cp.problem, cp.provenance));
    if (!o.sas_out.empty())
        write_file_atomic(o.sas_out, write_sas(cp.problem));
    std::cerr << "compiled " << cp.problem.model.num_actions() << " actions (" << cp.provenance << ")\n";
    return exit_ok;
}

struct PlanOpts {
    std::string problem, out, algorithm = "astar";
    SearchLimits limits;
};

int cmd_plan(const PlanOpts &o) {
    const ProblemFile pf = parse_problem(read_file(o.problem));
    SearchResult r;
    if (o.algorithm == "astar")
        r = solve(pf.problem, o.limits);
    else if (o.algorithm == "bfs")
        r = solve_bfs(pf.problem, o.limits);
    else
        throw ValidationError("unknown --algorithm '" + o.algorithm + "' (astar or bfs)");
    std::cerr << "expanded " << r.stats.expanded << ", generated " << r.stats.generated << ", "
              << fmt(r.stats.wall_seconds) << " s\n";
    switch (r.outcome) {
    case SearchOutcome::plan:
        emit(o.out, serialize_plan(r.plan));
        std::cerr << "plan found: " << r.plan.size() << " steps\n";
        return exit_ok;
    case SearchOutcome::no_plan:
        std::cerr << "no plan found\n";
        return exit_no_plan;
    case SearchOutcome::resource_limit:
        std::cerr << "resource limit reached\n";
        return exit_limit;
    }
    return exit_error;
}

struct ValidateOpts {
    std::string problem, plan, domain;
};

int cmd_validate(const ValidateOpts &o) {
    const ProblemFile pf = parse_problem(read_file(o.problem));
    Problem prob = pf.problem;
    if (!o.domain.empty()) {
        ActionModel truth = parse_domain(read_file(o.domain));
        if (truth.variables() != prob.model.variables())
            throw ValidationError("domain and problem have different variables");
        prob = Problem(std::move(truth), prob.init, prob.goal);
    }
    const Plan plan = parse_plan(read_file(o.plan));
    const ValidationReport r = validate_plan(plan, prob);
    if (r.success) {
        std::cout << "valid: " << plan.size() << " steps\n";
        return exit_ok;
    }
    const Variables &vars = prob.model.variables();
    if (r.reason == PlanFailure::inapplicable) {
        std::cout << "invalid: step " << *r.failing_step << " (" << plan.steps[*r.failing_step]
                  << ") is not applicable in " << describe(vars, r.states.back()) << "\n";
    } else {
        std::cout << "invalid: final state " << describe(vars, r.states.back())
                  << " does not satisfy the goal " << describe(vars, prob.goal) << "\n";
    }
    return exit_error;
}

struct AuditOpts {
    std::string model, domain, trajectories, out, bounds_out;
    std::optional<std::uint64_t> seed;
    std::size_t samples = 0;
    std::size_t cap = 50'000;
};

int cmd_audit(const AuditOpts &o) {
    const LearnedModel lm = parse_learned_model(read_file(o.model));
    const ActionModel truth = parse_domain(read_file(o.domain));
    AuditMode mode = AuditMode::exhaustive(o.cap);
    if (o.samples > 0) {
        if (!o.seed)
            throw ValidationError("sampled audit (--samples) requires --seed");
        mode = AuditMode::sampled(o.samples, *o.seed);
    }
    const SafetyReport report = audit_safety(learned_to_model(lm), truth, mode);
    emit(o.out, serialize_safety_report(report, truth.variables()));
    int code = exit_ok;
    if (report.safe) {
        std::cerr << "safe: " << report.states_checked << " states checked\n";
    } else {
        const SafetyCounterexample &cx = *report.counterexample;
        std::cerr << "UNSAFE: " << cx.action << " in " << describe(truth.variables(), cx.state) << " ("
                  << to_string(cx.kind) << ")\n";
        code = exit_error;
    }
    if (!o.trajectories.empty()) {
        const auto trajs = parse_trajectories(read_file(o.trajectories), truth.variables());
        const BoundsReport bounds = audit_bounds(lm, truth, trajs);
        if (!o.bounds_out.empty())
            write_file_atomic(o.bounds_out, serialize_bounds_report(bounds, truth.variables()));
        std::cerr << "bounds: " << bounds.actions_checked << " actions checked, "
                  << bounds.violations.size() << " violations\n";
        if (!bounds.clean())
            code = exit_error;
    }
    return code;
}

struct BoundOpts {
    PacParams p;
    std::string domain;
};

int cmd_bound(BoundOpts o) {
    if (!o.domain.empty()) {
        const ActionModel m = parse_domain(read_file(o.domain));
        o.p.d = max_domain_size(m.variables());
        o.p.num_actions = static_cast<long long>(m.num_actions());
        o.p.num_vars = static_cast<long long>(m.variables().size());
    }
    const SampleBound b = sample_complexity(o.p);
    char real[64];
    std::snprintf(real, sizeof real, "%.9Lf", b.real);
    std::cout << b.m << "\nreal " << real << "\n";
    std::cerr << "d=" << o.p.d << " |A|=" << o.p.num_actions << " |X|=" << o.p.num_vars
              << " epsilon=" << fmt(o.p.epsilon) << " delta=" << fmt(o.p.delta) << "\n";
    return exit_ok;
}

struct TableOpts {
    double mu = 1.0;
    std::optional<double> epsilon, gamma;
};

int cmd_table(const TableOpts &o) {
    if (!o.epsilon && !o.gamma)
        throw ValidationError("table needs --epsilon and/or --gamma");
    std::ostringstream out;
    if (o.gamma) {
        const double eps = epsilon_for_gamma(*o.gamma, o.mu);
        out << "epsilon_max " << fmt(eps) << "\n";
        out << "epsilon_max_conservative " << fmt(epsilon_for_gamma_conservative(*o.gamma, o.mu)) << "\n";
    }
    if (o.epsilon) {
        const SolvabilityTable t = solvability_table(o.mu, *o.epsilon);
        out << "mu " << fmt(t.mu) << "\n"
            << "epsilon " << fmt(t.epsilon) << "\n"
            << "P(plan|solvable) " << fmt(t.plan_given_solvable) << "\n"
            << "P(no-plan|solvable) " << fmt(t.no_plan_given_solvable) << "\n"
            << "P(plan|unsolvable) " << fmt(t.plan_given_unsolvable) << "\n"
            << "P(no-plan|unsolvable) " << fmt(t.no_plan_given_unsolvable) << "\n"
            << "P(plan) " << fmt(t.p_plan) << "\n"
            << "P(no-plan) " << fmt(t.p_no_plan) << "\n";
        if (t.p_no_plan > 0)
            out << "P(solvable|no-plan) " << fmt(prob_solvable_given_no_plan(*o.epsilon, o.mu)) << "\n";
    }
    std::cout << out.str();
    return exit_ok;
}

struct ExperimentOpts {
    ExperimentConfig cfg;
    std::string out;
    std::string train_mode = "optimal", train_goal_source = "reachable";
    std::string eval_mode = "optimal", eval_goal_source = "reachable";
    std::string mu_mode = "exact-solvable";
    bool include_unsolvable = false;
    bool timing = false;
    bool quiet = false;
};

int cmd_experiment(ExperimentOpts o) {
    ExperimentConfig &cfg = o.cfg;
    finish_dist(cfg.train_dist, o.train_mode, o.train_goal_source);
    finish_dist(cfg.eval_dist, o.eval_mode, o.eval_goal_source);
    cfg.eval_dist.solvable_only = !o.include_unsolvable;
    cfg.mu_mode = mu_mode_from_string(o.mu_mode);
    if (!o.quiet) {
        cfg.progress = [](const ExperimentRecord &r) {
            std::cerr << "m=" << r.m << " run=" << r.run << " solve_rate=" << fmt(r.solve_rate)
                      << " solvable=" << r.solvable << "/" << r.eval_instances
                      << " unsafe=" << r.unsafe_plans << "\n";
        };
    }
    const auto records = run_experiment(cfg);
    emit(o.out, write_results_csv(records, {.include_timing = o.timing}));

    const ActionModel truth = gen_logistics(cfg.domain);
    const PacParams params{max_domain_size(truth.variables()), static_cast<long long>(truth.num_actions()),
                           static_cast<long long>(truth.variables().size()), cfg.epsilon, cfg.delta};
    const PacVerdict v = check_pac_claim(records, params);
    std::cerr << "required m for epsilon=" << fmt(cfg.epsilon) << " delta=" << fmt(cfg.delta) << ": "
              << v.required_m << "\n";
    if (v.applicable) {
        std::cerr << "PAC check: " << v.runs_within_epsilon << "/" << v.runs
                  << " runs within epsilon (need fraction >= " << fmt(1.0 - cfg.delta) << "): "
                  << (v.pass ? "pass" : "fail") << "\n";
    } else {
        std::cerr << "PAC check: not applicable (no m reaches the bound)\n";
    }
    std::size_t unsafe = 0;
    for (const ExperimentRecord &r : records)
        unsafe += r.unsafe_plans;
    if (unsafe > 0) {
        std::cerr << "error: " << unsafe << " unsafe plans\n";
        return exit_error;
    }
    return exit_ok;
}

} // namespace

int run(int argc, char **argv) {
    CLI::App app{"Learn safe SAS+ action models from trajectories and plan with them", "safeplan"};
    app.set_config("--config", "", "Read flags from a TOML/INI file (command-line flags win)");
    app.require_subcommand(1);
    app.set_version_flag("--version", "safeplan 0.1.0");

    std::function<int()> action;

    GenDomainOpts gd;
    auto *c_gd = app.add_subcommand("gen-domain", "Write a ground-truth logistics domain");
    c_gd->add_option("--locations", gd.cfg.num_locations, "Number of locations")->capture_default_str();
    c_gd->add_option("--trucks", gd.cfg.num_trucks, "Number of trucks")->capture_default_str();
    c_gd->add_option("--packages", gd.cfg.num_packages, "Number of packages")->capture_default_str();
    c_gd->add_option("--out,-o", gd.out, "Output *.domain.json (default: stdout)");
    c_gd->add_option("--vars-out", gd.vars_out, "Also write the variables alone (*.vars.json)");
    c_gd->add_option("--problem-out", gd.problem_out, "Also write a ground-truth *.problem.json");
    c_gd->add_option("--init", gd.init, "Initial state for --problem-out, e.g. TruckAt=A,PackageAt=B");
    c_gd->add_option("--goal", gd.goal, "Goal for --problem-out, e.g. PackageAt=C");
    c_gd->callback([&] { action = [&] { return cmd_gen_domain(gd); }; });

    SampleOpts sm;
    auto *c_sm = app.add_subcommand("sample", "Sample trajectories from a ground-truth domain");
    c_sm->add_option("--domain,-d", sm.domain, "Ground-truth *.domain.json")->required();
    c_sm->add_option("--count,-n", sm.count, "Number of trajectories")->required();
    c_sm->add_option("--seed", sm.seed, "Random seed")->required();
    c_sm->add_option("--out,-o", sm.out, "Output *.traj.jsonl (default: stdout)");
    c_sm->add_option("--id-prefix", sm.prefix, "Trajectory id prefix")->capture_default_str();
    add_dist(c_sm, sm.dist, sm.mode, sm.goal_source, "");
    c_sm->callback([&] { action = [&] { return cmd_sample(sm); }; });

    LearnOpts ln;
    auto *c_ln = app.add_subcommand("learn", "Learn a conservative model from trajectories");
    c_ln->add_option("--trajectories,-t", ln.trajectories, "Input *.traj.jsonl")->required();
    c_ln->add_option("--domain-vars", ln.vars, "File providing the variables (domain, problem, model)")
        ->required();
    c_ln->add_option("--out,-o", ln.out, "Output *.model.json (default: stdout)");
    c_ln->add_option("--check-against", ln.check_against, "Replay every trajectory on this domain first");
    c_ln->callback([&] { action = [&] { return cmd_learn(ln); }; });

    CompileOpts cp;
    auto *c_cp = app.add_subcommand("compile", "Build a planning problem from a learned model");
    c_cp->add_option("--model,-m", cp.model, "Learned *.model.json")->required();
    c_cp->add_option("--problem,-p", cp.problem, "Take init and goal from this *.problem.json");
    c_cp->add_option("--init", cp.init, "Initial state, e.g. TruckAt=A,PackageAt=B");
    c_cp->add_option("--goal", cp.goal, "Goal, e.g. PackageAt=C");
    c_cp->add_option("--out,-o", cp.out, "Output *.problem.json (default: stdout)");
    c_cp->add_option("--sas-out", cp.sas_out, "Also write translator-format *.sas");
    c_cp->add_option("--provenance", cp.provenance, "Provenance string (default: model fingerprint)");
    c_cp->callback([&] { action = [&] { return cmd_compile(cp); }; });

    PlanOpts pl;
    auto *c_pl = app.add_subcommand("plan", "Solve a *.problem.json optimally");
    c_pl->add_option("--problem,-p", pl.problem, "Input *.problem.json")->required();
    c_pl->add_option("--out,-o", pl.out, "Output plan file (default: stdout)");
    c_pl->add_option("--algorithm", pl.algorithm, "astar or bfs")->capture_default_str();
    add_limits(c_pl, pl.limits);
    c_pl->callback([&] { action = [&] { return cmd_plan(pl); }; });

    ValidateOpts vl;
    auto *c_vl = app.add_subcommand("validate", "Check a plan against a problem");
    c_vl->add_option("--problem,-p", vl.problem, "*.problem.json with init and goal")->required();
    c_vl->add_option("--plan", vl.plan, "Plan file")->required();
    c_vl->add_option("--domain,-d", vl.domain, "Validate against this domain's actions instead");
    c_vl->callback([&] { action = [&] { return cmd_validate(vl); }; });

    AuditOpts au;
    auto *c_au = app.add_subcommand("audit", "Check a learned model's safety against the ground truth");
    c_au->add_option("--model,-m", au.model, "Learned *.model.json")->required();
    c_au->add_option("--domain,-d", au.domain, "Ground-truth *.domain.json")->required();
    c_au->add_option("--trajectories,-t", au.trajectories, "Also audit the bounds on this corpus");
    c_au->add_option("--out,-o", au.out, "Safety report JSON (default: stdout)");
    c_au->add_option("--bounds-out", au.bounds_out, "Bounds report JSON");
    c_au->add_option("--samples", au.samples, "Sample this many states instead of enumerating");
    c_au->add_option("--seed", au.seed, "Seed for --samples");
    c_au->add_option("--cap", au.cap, "State cap for exhaustive mode")->capture_default_str();
    c_au->callback([&] { action = [&] { return cmd_audit(au); }; });

    BoundOpts bd;
    auto *c_bd = app.add_subcommand("bound", "Sufficient number of trajectories");
    c_bd->add_option("--d", bd.p.d, "Largest domain size");
    c_bd->add_option("--actions", bd.p.num_actions, "Number of actions");
    c_bd->add_option("--vars", bd.p.num_vars, "Number of variables");
    c_bd->add_option("--domain", bd.domain, "Take d, actions and vars from this domain");
    c_bd->add_option("--epsilon", bd.p.epsilon, "Failure rate target")->required();
    c_bd->add_option("--delta", bd.p.delta, "Confidence parameter")->required();
    c_bd->callback([&] { action = [&] { return cmd_bound(bd); }; });

    TableOpts tb;
    auto *c_tb = app.add_subcommand("table", "Solvability table and gamma to epsilon conversion");
    c_tb->add_option("--mu", tb.mu, "Probability an instance is solvable")->required();
    c_tb->add_option("--epsilon", tb.epsilon, "Failure rate on solvable instances");
    c_tb->add_option("--gamma", tb.gamma, "Allowed P(solvable | no plan)");
    c_tb->callback([&] { action = [&] { return cmd_table(tb); }; });

    ExperimentOpts ex;
    auto *c_ex = app.add_subcommand("experiment", "Sweep m and measure solve rates");
    c_ex->add_option("--seed", ex.cfg.seed, "Master seed")->required();
    c_ex->add_option("--m", ex.cfg.m_values, "Training set sizes, ascending (comma separated)")
        ->required()
        ->delimiter(',');
    c_ex->add_option("--runs", ex.cfg.runs, "Independent runs per m")->capture_default_str();
    c_ex->add_option("--eval-instances", ex.cfg.eval_instances, "Evaluation draws per run")
        ->capture_default_str();
    c_ex->add_option("--locations", ex.cfg.domain.num_locations)->capture_default_str();
    c_ex->add_option("--trucks", ex.cfg.domain.num_trucks)->capture_default_str();
    c_ex->add_option("--packages", ex.cfg.domain.num_packages)->capture_default_str();
    c_ex->add_option("--epsilon", ex.cfg.epsilon)->capture_default_str();
    c_ex->add_option("--delta", ex.cfg.delta)->capture_default_str();
    c_ex->add_option("--mu-mode", ex.mu_mode, "exact-solvable or planner-relative")->capture_default_str();
    c_ex->add_flag("--include-unsolvable", ex.include_unsolvable, "Keep unsolvable evaluation draws");
    add_dist(c_ex, ex.cfg.train_dist, ex.train_mode, ex.train_goal_source, "train-");
    add_dist(c_ex, ex.cfg.eval_dist, ex.eval_mode, ex.eval_goal_source, "eval-");
    add_limits(c_ex, ex.cfg.limits);
    c_ex->add_option("--jobs,-j", ex.cfg.jobs, "Worker threads")->capture_default_str();
    c_ex->add_option("--label", ex.cfg.label, "CSV label (default: derived from the domain)");
    c_ex->add_option("--out,-o", ex.out, "Output CSV (default: stdout)");
    c_ex->add_flag("--timing", ex.timing, "Add a wall_seconds column (not reproducible)");
    c_ex->add_flag("--quiet,-q", ex.quiet, "No per-record progress on stderr");
    c_ex->callback([&] { action = [&] { return cmd_experiment(ex); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_error;
    }

    try {
        return action();
    } catch (const StateCapError &e) {
        std::cerr << "safeplan: resource limit: " << e.what() << "\n";
        return exit_limit;
    } catch (const SamplingError &e) {
        std::cerr << "safeplan: resource limit: " << e.what() << "\n";
        return exit_limit;
    } catch (const std::exception &e) {
        std::cerr << "safeplan: error: " << e.what() << "\n";
        return exit_error;
    }
}

} // namespace safeplan::cli
