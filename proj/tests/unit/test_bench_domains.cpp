#include "fixtures.hpp"

#include "safeplan/bench_domains.hpp"
#include "safeplan/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace safeplan;
using namespace safeplan::testing;

TEST_CASE("gen_logistics inventory") {
    const ActionModel m3 = logistics_3loc();
    CHECK(m3.num_actions() == 12);
    REQUIRE(m3.variables().size() == 2);
    CHECK(m3.variables()[0].domain_size() == 3);
    CHECK(m3.variables()[1].domain_size() == 4);
    CHECK(m3 == gen_logistics({3, 1, 1, 0}));
    CHECK(m3.at("Move_A_B").pre() == PartialAssignment{{TruckAt, A}});
    CHECK(m3.at("Unload_C").pre() == PartialAssignment{{TruckAt, C}, {PackageAt, T}});

    CHECK(gen_logistics({2, 1, 1, 0}).num_actions() == 6);

    // L(L-1) moves per truck, L pickups and L unloads per (truck, package).
    for (int l = 2; l <= 5; ++l)
        for (int t = 1; t <= 2; ++t)
            for (int p = 1; p <= 2; ++p) {
                const ActionModel m = gen_logistics({l, t, p, 0});
                CHECK(m.num_actions() == static_cast<std::size_t>(t * l * (l - 1) + 2 * t * p * l));
                CHECK(m.variables().size() == static_cast<std::size_t>(t + p));
                CHECK(m.variables().back().domain_size() == l + t);
                for (const auto &[name, a] : m.actions())
                    for (const Fact &f : a.eff())
                        CHECK_FALSE(a.pre().contains(f));
            }
    CHECK(gen_logistics({3, 2, 1, 0}).at("Pickup_t2_p1_B").eff() == PartialAssignment{{2, 4}});
}

TEST_CASE("sample_instance") {
    const ActionModel truth = logistics_3loc();

    SUBCASE("sampled trajectories validate and reach their goal") {
        for (TrajectoryMode mode :
             {TrajectoryMode::optimal, TrajectoryMode::random_optimal, TrajectoryMode::walk_then_plan}) {
            DistConfig cfg;
            cfg.mode = mode;
            RngStream rng(40);
            for (int i = 0; i < 100; ++i) {
                const InstanceTriple inst = sample_instance(truth, cfg, rng);
                REQUIRE(inst.trajectory);
                const Trajectory &t = *inst.trajectory;
                CHECK(t.states.front() == inst.init);
                CHECK(satisfies_goal(t.states.back(), inst.goal));
                CHECK(validate_plan(Plan{t.actions}, Problem(truth, inst.init, inst.goal)).success);
                CHECK_FALSE(inst.goal.empty());
                if (mode != TrajectoryMode::walk_then_plan)
                    CHECK(brute_force_distance(truth, inst.init, inst.goal) == t.length());
            }
        }
    }
    SUBCASE("full-density goals") {
        DistConfig cfg;
        cfg.goal_density = 1.0;
        RngStream rng(2);
        for (int i = 0; i < 30; ++i) {
            const InstanceTriple inst = sample_instance(truth, cfg, rng);
            CHECK(inst.goal.size() == 2);
            CHECK(inst.trajectory);
        }
    }
    SUBCASE("determinism") {
        DistConfig cfg;
        cfg.mode = TrajectoryMode::random_optimal;
        RngStream a(7), b(7);
        const InstanceTriple x = sample_instance(truth, cfg, a);
        const InstanceTriple y = sample_instance(truth, cfg, b);
        CHECK(x.init == y.init);
        CHECK(x.goal == y.goal);
        CHECK(x.trajectory == y.trajectory);
    }
    SUBCASE("unsolvable draws") {
        // A domain where the package can never leave B is solvable only for
        // goals that keep it there.
        const ActionModel stuck(truth.variables(), {truth.at("Move_A_B"), truth.at("Move_B_A")});
        DistConfig cfg;
        cfg.goal_source = GoalSource::uniform;
        cfg.solvable_only = false;
        RngStream rng(3);
        int unsolvable = 0;
        for (int i = 0; i < 50; ++i) {
            const InstanceTriple inst = sample_instance(stuck, cfg, rng);
            CHECK(inst.solvable == brute_force_distance(stuck, inst.init, inst.goal).has_value());
            CHECK(inst.trajectory.has_value() == inst.solvable);
            unsolvable += !inst.solvable;
        }
        CHECK(unsolvable > 0);

        cfg.solvable_only = true;
        cfg.max_rejections = 3;
        const ActionModel none(truth.variables(), {Action("Noop", PartialAssignment{{PackageAt, T}}, {})});
        cfg.goal_density = 1.0;
        bool threw = false;
        for (int i = 0; i < 10 && !threw; ++i) {
            try {
                sample_instance(none, cfg, rng);
            } catch (const SamplingError &) {
                threw = true;
            }
        }
        CHECK(threw);
    }
    SUBCASE("logistics example instance") {
        RngStream rng(0);
        const auto t = produce_trajectory(truth, ls(A, B), PartialAssignment{{PackageAt, C}}, DistConfig{}, rng);
        REQUIRE(t);
        CHECK(t->length() == 4);
    }
    SUBCASE("producer with limited capabilities") {
        DistConfig cfg;
        cfg.producer_max_length = 3;
        RngStream rng(0);
        CHECK_FALSE(produce_trajectory(truth, ls(A, B), PartialAssignment{{PackageAt, C}}, cfg, rng));
        cfg.producer_max_length = 4;
        CHECK(produce_trajectory(truth, ls(A, B), PartialAssignment{{PackageAt, C}}, cfg, rng));
    }
}

TEST_CASE("string conversions") {
    for (TrajectoryMode m : {TrajectoryMode::optimal, TrajectoryMode::random_optimal, TrajectoryMode::walk_then_plan})
        CHECK(trajectory_mode_from_string(to_string(m)) == m);
    for (GoalSource g : {GoalSource::reachable, GoalSource::uniform})
        CHECK(goal_source_from_string(to_string(g)) == g);
    CHECK_THROWS_AS(trajectory_mode_from_string("bogus"), ValidationError);
}

TEST_CASE("estimate_action_frequencies") {
    const ActionModel truth = logistics_3loc();
    RngStream rng(11);
    const auto one = estimate_action_frequencies(truth, DistConfig{}, 1, rng);
    CHECK(one.size() == 12);
    for (const auto &[name, f] : one)
        CHECK((f == 0.0 || f == 1.0));

    const auto freq = estimate_action_frequencies(truth, DistConfig{}, 400, rng);
    for (const auto &[name, f] : freq) {
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
    }
    CHECK(freq.count("Fly_A_B") == 0);

    // Spread across seeds shrinks roughly as 1/sqrt(n).
    auto spread = [&](std::size_t n) {
        std::vector<double> xs;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            RngStream r(1000 + seed);
            xs.push_back(estimate_action_frequencies(truth, DistConfig{}, n, r).at("Move_A_B"));
        }
        const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / 10;
        double var = 0;
        for (double x : xs)
            var += (x - mean) * (x - mean);
        return std::sqrt(var / 9);
    };
    CHECK(spread(400) < spread(25));
}

TEST_CASE("sample_corpus ids and reproducibility") {
    const ActionModel truth = gen_logistics({3, 1, 2, 0});
    const auto a = sample_corpus(truth, DistConfig{}, 5, RngStream(1));
    const auto b = sample_corpus(truth, DistConfig{}, 8, RngStream(1), "t");
    REQUIRE(a.size() == 5);
    CHECK(a[0].id == "t0");
    CHECK(a[4].id == "t4");
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
}
