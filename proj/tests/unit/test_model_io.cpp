#include "fixtures.hpp"

#include "safeplan/bench_domains.hpp"
#include "safeplan/errors.hpp"
#include "safeplan/learner.hpp"
#include "safeplan/model_io.hpp"

#include <doctest.h>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <sstream>

using namespace safeplan;
using namespace safeplan::testing;

namespace {

std::string data_file(const std::string &name) {
    return read_file(std::string(SAFEPLAN_DATA_DIR) + "/" + name);
}

std::size_t count_lines(const std::string &s) {
    std::size_t n = 0;
    for (char c : s)
        n += c == '\n';
    return n;
}

} // namespace

TEST_CASE("bundled logistics_3loc domain") {
    const ActionModel m = parse_domain(data_file("logistics_3loc.domain.json"));
    CHECK(m.num_actions() == 12);
    CHECK(m.variables().size() == 2);
    CHECK(m == logistics_3loc());
}

TEST_CASE("domain canonicalization is idempotent") {
    RngStream rng(3);
    for (int i = 0; i < 50; ++i) {
        const ActionModel m = random_sas_model(rng, 4, 4, 6);
        const std::string once = serialize_domain(parse_domain(serialize_domain(m)));
        CHECK(once == serialize_domain(parse_domain(once)));
        CHECK(parse_domain(once) == m);
    }
}

TEST_CASE("domain with no actions") {
    const ActionModel m = parse_domain(
        R"({"schema_version":1,"kind":"domain","variables":[{"name":"x","values":["a"]}],"actions":[]})");
    CHECK(m.num_actions() == 0);
}

TEST_CASE("domain parse errors carry a location") {
    SUBCASE("syntax") {
        try {
            parse_domain("{\n  \"schema_version\": 1,\n  oops\n}");
            FAIL("expected ParseError");
        } catch (const ParseError &e) {
            CHECK(e.location().rfind("line 3", 0) == 0);
        }
    }
    SUBCASE("dangling value name") {
        try {
            parse_domain(R"({"schema_version":1,"kind":"domain",
                "variables":[{"name":"x","values":["a","b"]}],
                "actions":[{"name":"o","pre":{"x":"c"},"eff":{}}]})");
            FAIL("expected ParseError");
        } catch (const ParseError &e) {
            CHECK(e.location() == "$.actions[0].pre.x");
        }
    }
    SUBCASE("wrong schema version") {
        CHECK_THROWS_AS(parse_domain(R"({"schema_version":2,"kind":"domain","variables":[],"actions":[]})"),
                        ParseError);
    }
}

TEST_CASE("problem round trip") {
    const Problem p(logistics_3loc(), ls(A, B), PartialAssignment{{PackageAt, C}});
    const std::string text = serialize_problem(p, "test");
    const ProblemFile back = parse_problem(text);
    CHECK(back.problem.model == p.model);
    CHECK(back.problem.init == p.init);
    CHECK(back.problem.goal == p.goal);
    CHECK(back.provenance == "test");
    CHECK(serialize_problem(back.problem, back.provenance) == text);
}

TEST_CASE("parse_trajectories") {
    const ActionModel truth = logistics_3loc();
    const Variables &vars = truth.variables();

    SUBCASE("single-state record") {
        const auto ts = parse_trajectories(
            R"({"id":"z","states":[{"TruckAt":"A","PackageAt":"C"}],"actions":[]})", vars);
        REQUIRE(ts.size() == 1);
        CHECK(ts[0].length() == 0);
    }
    SUBCASE("T1 from the bundled file is consistent with the truth") {
        const auto ts = parse_trajectories(data_file("t1.traj.jsonl"), vars, &truth);
        REQUIRE(ts.size() == 1);
        CHECK(ts[0] == t1());
    }
    SUBCASE("altered last state is a consistency error at step 3") {
        Trajectory bad = t1();
        bad.states.back().set(PackageAt, T);
        const std::string text = serialize_trajectories(std::vector<Trajectory>{bad}, vars);
        CHECK_NOTHROW(parse_trajectories(text, vars));
        try {
            parse_trajectories(text, vars, &truth);
            FAIL("expected ConsistencyError");
        } catch (const ConsistencyError &e) {
            CHECK(e.step() == 3u);
        }
    }
    SUBCASE("structure error") {
        CHECK_THROWS_AS(parse_trajectories(
                            R"({"id":"z","states":[{"TruckAt":"A","PackageAt":"C"}],"actions":["Move_A_B"]})",
                            vars),
                        StructureError);
    }
    SUBCASE("partial state") {
        CHECK_THROWS_AS(parse_trajectories(R"({"id":"z","states":[{"TruckAt":"A"}],"actions":[]})", vars),
                        ParseError);
    }
}

TEST_CASE("trajectory and learned-model round trips") {
    const ActionModel truth = gen_logistics({3, 2, 1, 0});
    const auto corpus = sample_corpus(truth, DistConfig{}, 20, RngStream(8));
    const std::string text = serialize_trajectories(corpus, truth.variables());
    CHECK(count_lines(text) == 20);
    const auto back = parse_trajectories(text, truth.variables(), &truth);
    CHECK(back == corpus);
    CHECK(serialize_trajectories(back, truth.variables()) == text);

    const LearnedModel lm = learn(corpus, truth.variables());
    const std::string mtext = serialize_learned_model(lm);
    CHECK(parse_learned_model(mtext) == lm);
    CHECK(serialize_learned_model(parse_learned_model(mtext)) == mtext);
    CHECK(parse_variables(mtext) == truth.variables());
    const std::string vtext = serialize_variables(truth.variables());
    CHECK(parse_variables(vtext) == truth.variables());
    CHECK(serialize_variables(parse_variables(vtext)) == vtext);
}

TEST_CASE("learned model rejects invariant violations") {
    const char *zero_obs = R"({"schema_version":1,"kind":"learned-model",
        "variables":[{"name":"x","values":["a","b"]}],
        "actions":[{"name":"o","pre_upper":{"x":"a"},"eff_lower":{},"observations":0}]})";
    CHECK_THROWS_AS(parse_learned_model(zero_obs), ParseError);
    const char *overlap = R"({"schema_version":1,"kind":"learned-model",
        "variables":[{"name":"x","values":["a","b"]}],
        "actions":[{"name":"o","pre_upper":{"x":"a"},"eff_lower":{"x":"a"},"observations":1}]})";
    CHECK_THROWS_AS(parse_learned_model(overlap), ParseError);
}

TEST_CASE("mutated files are rejected") {
    // Drop or replace one non-whitespace character of a valid file. Every
    // mutation either raises a library error or still describes a model
    // that satisfies all invariants (renaming a value, say).
    const std::string valid = serialize_domain(logistics_3loc());
    RngStream rng(21);
    int rejected = 0, tried = 0;
    while (tried < 400) {
        std::string text = valid;
        const auto pos = rng.uniform_below(text.size());
        if (std::isspace(static_cast<unsigned char>(text[pos])))
            continue;
        ++tried;
        if (rng.bernoulli(0.5))
            text.erase(pos, 1);
        else
            text[pos] = "{}[]\":,xyz0"[rng.uniform_below(11)];
        try {
            const ActionModel m = parse_domain(text);
            check_variables(m.variables());
            CHECK(parse_domain(serialize_domain(m)) == m);
        } catch (const Error &) {
            ++rejected;
        }
    }
    CHECK(rejected > 250);
}

TEST_CASE("write_sas") {
    SUBCASE("no actions") {
        const Problem p(ActionModel(logistics_3loc().variables(), {}), ls(A, B), {});
        const std::string sas = write_sas(p);
        CHECK(sas.find("end_goal\n0\n0\n") != std::string::npos);
    }
    SUBCASE("logistics_3loc layout") {
        const Problem p(logistics_3loc(), ls(A, B), PartialAssignment{{PackageAt, C}});
        const std::string sas = write_sas(p);
        CHECK(sas == write_sas(p));
        CHECK(sas.rfind("begin_version\n3\nend_version\nbegin_metric\n0\nend_metric\n2\n", 0) == 0);
        CHECK(sas.find("begin_variable\nTruckAt\n-1\n3\n") != std::string::npos);
        CHECK(sas.find("begin_variable\nPackageAt\n-1\n4\n") != std::string::npos);
        // Pickup_B: prevail TruckAt=B, pre/post PackageAt B -> T.
        CHECK(sas.find("begin_operator\nPickup_B\n1\n0 1\n1\n0 1 1 3\n1\nend_operator\n") !=
              std::string::npos);
        CHECK(sas.find("begin_state\n0\n1\nend_state\nbegin_goal\n1\n1 2\nend_goal\n12\n") !=
              std::string::npos);
        CHECK(sas.substr(sas.size() - 15) == "end_operator\n0\n");
    }
}

TEST_CASE("results csv") {
    CHECK(write_results_csv({}) ==
          "schema_version,label,m,run,observed_actions,eval_instances,solvable,solved,"
          "plans_found,unsolved_solvable,unsafe_plans,resource_limits,solve_rate,plan_rate,"
          "mean_plan_length,mu_hat\r\n");

    ExperimentRecord r;
    r.label = "logistics(locations=3,trucks=1)";
    r.m = 10;
    r.solve_rate = 0.875;
    r.mean_plan_length = 10.0 / 3.0;
    r.wall_seconds = 1.5;
    const std::vector<ExperimentRecord> one{r};
    const std::string csv = write_results_csv(one);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    CHECK(csv.find("\"logistics(locations=3,trucks=1)\"") != std::string::npos);

    ExperimentRecord quoted = r;
    quoted.label = "say \"hi\"\nthere";
    const std::vector<ExperimentRecord> recs{r, quoted};
    auto back = parse_results_csv(write_results_csv(recs));
    REQUIRE(back.size() == 2);
    CHECK(back[1].label == quoted.label);
    CHECK(back[0].mean_plan_length == r.mean_plan_length);
    CHECK(back[0].wall_seconds == 0.0);

    auto timed = parse_results_csv(write_results_csv(recs, {.include_timing = true}));
    CHECK(timed == recs);
}

TEST_CASE("plan text") {
    const Plan p{{"Move_A_B", "Pickup_B"}};
    CHECK(parse_plan(serialize_plan(p)) == p);
    CHECK(parse_plan("; comment\n\n  Move_A_B  \n").steps == std::vector<std::string>{"Move_A_B"});
}

TEST_CASE("atomic write") {
    const auto dir = std::filesystem::temp_directory_path() / "safeplan_io_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "out.txt").string();
    write_file_atomic(path, "hello\n");
    CHECK(read_file(path) == "hello\n");
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
    CHECK_THROWS_AS(write_file_atomic((dir / "missing" / "x").string(), "z"), Error);

    // Writing through a symlink updates the target and keeps the link.
    const auto link = dir / "link.txt";
    std::filesystem::create_symlink(path, link);
    write_file_atomic(link.string(), "again\n");
    CHECK(std::filesystem::is_symlink(link));
    CHECK(read_file(path) == "again\n");

    // Character devices are written in place.
    write_file_atomic("/dev/null", "discarded");
    CHECK(std::filesystem::is_character_file("/dev/null"));
    std::filesystem::remove_all(dir);
}
