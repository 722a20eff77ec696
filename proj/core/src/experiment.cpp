#include "safeplan/experiment.hpp"

#include "safeplan/compiler.hpp"
#include "safeplan/errors.hpp"
#include "safeplan/learner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <thread>

namespace safeplan {

const char *to_string(MuMode m) {
    return m == MuMode::exact_solvable ? "exact-solvable" : "planner-relative";
}

MuMode mu_mode_from_string(const std::string &s) {
    if (s == "exact-solvable")
        return MuMode::exact_solvable;
    if (s == "planner-relative")
        return MuMode::planner_relative;
    throw ValidationError("unknown mu mode '" + s + "'");
}

void check_experiment_config(const ExperimentConfig &cfg) {
    if (cfg.m_values.empty())
        throw ValidationError("m_values must not be empty");
    for (std::size_t i = 1; i < cfg.m_values.size(); ++i) {
        if (cfg.m_values[i] <= cfg.m_values[i - 1])
            throw ValidationError("m_values must be strictly ascending");
    }
    if (cfg.eval_instances < 1)
        throw ValidationError("eval_instances must be at least 1");
    if (cfg.runs < 1)
        throw ValidationError("runs must be at least 1");
}

namespace {

struct EvalInstance {
    State init;
    PartialAssignment goal;
    bool solvable = false;
};

std::string default_label(const LogisticsConfig &d) {
    return "logistics(locations=" + std::to_string(d.num_locations) +
           ",trucks=" + std::to_string(d.num_trucks) +
           ",packages=" + std::to_string(d.num_packages) + ")";
}

// All records for one run. Training corpora are nested across m (the corpus
// for a smaller m is a prefix of the one for a larger m) and every m is
// evaluated on the same draws.
std::vector<ExperimentRecord> run_one(const ExperimentConfig &cfg, const ActionModel &truth,
                                      std::size_t run, const std::string &label) {
    const RngStream master(cfg.seed);
    const RngStream train_stream = master.derive({stream_key("train"), run});
    const RngStream eval_stream = master.derive({stream_key("eval"), run});

    std::vector<EvalInstance> evals;
    evals.reserve(cfg.eval_instances);
    for (std::size_t i = 0; i < cfg.eval_instances; ++i) {
        RngStream s = eval_stream.derive(i);
        InstanceTriple inst = sample_instance(truth, cfg.eval_dist, s);
        const bool solvable = cfg.mu_mode == MuMode::exact_solvable ? inst.solvable
                                                                    : inst.trajectory.has_value();
        evals.push_back({std::move(inst.init), std::move(inst.goal), solvable});
    }

    DistConfig train_dist = cfg.train_dist;
    train_dist.solvable_only = true;
    BoundsLearner learner(truth.variables());
    std::size_t drawn = 0;

    std::vector<ExperimentRecord> out;
    for (std::size_t m : cfg.m_values) {
        const auto start = std::chrono::steady_clock::now();
        for (; drawn < m; ++drawn) {
            RngStream s = train_stream.derive(drawn);
            InstanceTriple inst = sample_instance(truth, train_dist, s);
            learner.observe(*inst.trajectory);
        }
        const LearnedModel &lm = learner.model();

        ExperimentRecord rec;
        rec.label = label;
        rec.m = m;
        rec.run = run;
        rec.observed_actions = lm.actions.size();
        rec.eval_instances = evals.size();
        std::size_t limited_solvable = 0;
        std::size_t length_sum = 0;
        for (const EvalInstance &e : evals) {
            if (e.solvable)
                ++rec.solvable;
            const CompiledProblem compiled = compile(lm, e.init, e.goal);
            const SearchResult res = solve(compiled.problem, cfg.limits);
            if (res.outcome == SearchOutcome::resource_limit) {
                ++rec.resource_limits;
                if (e.solvable)
                    ++limited_solvable;
                continue;
            }
            if (!res.solved()) {
                if (e.solvable)
                    ++rec.unsolved_solvable;
                continue;
            }
            const ValidationReport check = validate_plan(res.plan, Problem(truth, e.init, e.goal));
            if (!check.success) {
                ++rec.unsafe_plans;
                continue;
            }
            ++rec.plans_found;
            length_sum += res.plan.size();
            if (e.solvable)
                ++rec.solved;
        }
        const std::size_t decided = rec.solvable - limited_solvable;
        rec.solve_rate = decided == 0 ? 1.0
                                      : static_cast<double>(rec.solved) / static_cast<double>(decided);
        rec.plan_rate = static_cast<double>(rec.plans_found) / static_cast<double>(rec.eval_instances);
        rec.mean_plan_length = rec.plans_found == 0 ? 0.0
                                                    : static_cast<double>(length_sum) /
                                                          static_cast<double>(rec.plans_found);
        rec.mu_hat = static_cast<double>(rec.solvable) / static_cast<double>(rec.eval_instances);
        rec.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.push_back(std::move(rec));
    }
    return out;
}

} // namespace

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig &cfg) {
    check_experiment_config(cfg);
    const ActionModel truth = gen_logistics(cfg.domain);
    const std::string label = cfg.label.empty() ? default_label(cfg.domain) : cfg.label;

    std::vector<std::vector<ExperimentRecord>> per_run(cfg.runs);
    std::mutex progress_mutex;
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t run = next.fetch_add(1);
            if (run >= cfg.runs)
                return;
            try {
                per_run[run] = run_one(cfg, truth, run, label);
                if (cfg.progress) {
                    std::lock_guard lock(progress_mutex);
                    for (const ExperimentRecord &r : per_run[run])
                        cfg.progress(r);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = cfg.runs;
                return;
            }
        }
    };

    const unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(cfg.runs)));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> threads;
        for (unsigned i = 0; i < jobs; ++i)
            threads.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);

    std::vector<ExperimentRecord> records;
    for (auto &rs : per_run)
        records.insert(records.end(), rs.begin(), rs.end());
    std::sort(records.begin(), records.end(), [](const auto &a, const auto &b) {
        return a.m != b.m ? a.m < b.m : a.run < b.run;
    });
    return records;
}

PacVerdict check_pac_claim(std::span<const ExperimentRecord> records, const PacParams &params,
                           std::optional<std::uint64_t> required_m) {
    PacVerdict v;
    v.required_m = required_m ? *required_m : sample_complexity(params).m;
    double failure_sum = 0;
    for (const ExperimentRecord &r : records) {
        if (r.m < v.required_m)
            continue;
        ++v.runs;
        const double failure = 1.0 - r.solve_rate;
        failure_sum += failure;
        v.max_failure_rate = std::max(v.max_failure_rate, failure);
        v.unsafe_plans += r.unsafe_plans;
        if (failure <= params.epsilon)
            ++v.runs_within_epsilon;
    }
    if (v.runs == 0)
        return v;
    v.applicable = true;
    v.fraction_within = static_cast<double>(v.runs_within_epsilon) / static_cast<double>(v.runs);
    v.mean_failure_rate = failure_sum / static_cast<double>(v.runs);
    v.pass = v.fraction_within >= 1.0 - params.delta;
    return v;
}

std::vector<std::pair<std::size_t, double>> mean_solve_rate_by_m(
    std::span<const ExperimentRecord> records) {
    std::map<std::size_t, std::pair<double, std::size_t>> acc;
    for (const ExperimentRecord &r : records) {
        auto &[sum, n] = acc[r.m];
        sum += r.solve_rate;
        ++n;
    }
    std::vector<std::pair<std::size_t, double>> out;
    for (const auto &[m, sn] : acc)
        out.emplace_back(m, sn.first / static_cast<double>(sn.second));
    return out;
}

} // namespace safeplan
