#include "safeplan/model_io.hpp"

#include "safeplan/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace safeplan {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// JSON reading with path-qualified errors.

std::string line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        std::string what = e.what();
        // Drop nlohmann's "[json.exception.parse_error.101] " prefix.
        if (auto pos = what.find("] "); pos != std::string::npos)
            what = what.substr(pos + 2);
        throw ParseError(line_col(text, e.byte == 0 ? 0 : e.byte - 1), what);
    }
}

class Node {
public:
    Node(const json &j, std::string path) : j_(j), path_(std::move(path)) {}

    const json &raw() const {
        return j_;
    }
    const std::string &path() const {
        return path_;
    }

    [[noreturn]] void fail(const std::string &what) const {
        throw ParseError(path_, what);
    }

    const Node &expect_object() const {
        if (!j_.is_object())
            fail("expected an object");
        return *this;
    }

    bool has(const char *key) const {
        return j_.is_object() && j_.contains(key);
    }

    Node at(const char *key) const {
        expect_object();
        if (!j_.contains(key))
            fail(std::string("missing key \"") + key + "\"");
        return Node(j_.at(key), path_ + "." + key);
    }

    std::vector<Node> items() const {
        if (!j_.is_array())
            fail("expected an array");
        std::vector<Node> out;
        for (std::size_t i = 0; i < j_.size(); ++i)
            out.emplace_back(j_[i], path_ + "[" + std::to_string(i) + "]");
        return out;
    }

    std::vector<std::pair<std::string, Node>> members() const {
        expect_object();
        std::vector<std::pair<std::string, Node>> out;
        for (auto it = j_.begin(); it != j_.end(); ++it)
            out.emplace_back(it.key(), Node(it.value(), path_ + "." + it.key()));
        return out;
    }

    std::string str() const {
        if (!j_.is_string())
            fail("expected a string");
        return j_.get<std::string>();
    }

    std::uint64_t uint() const {
        if (!j_.is_number_unsigned())
            fail("expected a non-negative integer");
        return j_.get<std::uint64_t>();
    }

    void only_keys(std::initializer_list<const char *> allowed) const {
        expect_object();
        std::set<std::string> ok(allowed.begin(), allowed.end());
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!ok.count(it.key()))
                fail("unexpected key \"" + it.key() + "\"");
        }
    }

private:
    const json &j_;
    std::string path_;
};

void check_header(const Node &root, std::initializer_list<const char *> kinds) {
    root.expect_object();
    const Node version = root.at("schema_version");
    if (version.uint() != static_cast<std::uint64_t>(file_schema_version))
        version.fail("unsupported schema_version " + version.raw().dump());
    const Node kind = root.at("kind");
    const std::string k = kind.str();
    for (const char *allowed : kinds) {
        if (k == allowed)
            return;
    }
    std::string expected;
    for (const char *allowed : kinds)
        expected += std::string(expected.empty() ? "" : " or ") + "\"" + allowed + "\"";
    kind.fail("expected kind " + expected + ", found \"" + k + "\"");
}

Variables read_variables(const Node &node) {
    Variables vars;
    for (const Node &v : node.items()) {
        v.only_keys({"name", "values"});
        VariableSpec spec;
        spec.name = v.at("name").str();
        for (const Node &val : v.at("values").items())
            spec.value_names.push_back(val.str());
        vars.push_back(std::move(spec));
    }
    try {
        check_variables(vars);
    } catch (const ValidationError &e) {
        node.fail(e.what());
    }
    return vars;
}

PartialAssignment read_assignment(const Node &node, const Variables &vars) {
    PartialAssignment pa;
    for (const auto &[name, value] : node.members()) {
        auto var = find_variable(vars, name);
        if (!var)
            value.fail("unknown variable \"" + name + "\"");
        const std::string value_name = value.str();
        auto val = find_value(vars[static_cast<std::size_t>(*var)], value_name);
        if (!val)
            value.fail("variable \"" + name + "\" has no value \"" + value_name + "\"");
        pa.set(*var, *val);
    }
    return pa;
}

State read_state(const Node &node, const Variables &vars) {
    PartialAssignment pa = read_assignment(node, vars);
    if (pa.size() != vars.size()) {
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (!pa.has_var(static_cast<VarId>(i)))
                node.fail("state does not assign variable \"" + vars[i].name + "\"");
        }
    }
    std::vector<ValueId> values(vars.size());
    for (const Fact &f : pa)
        values[static_cast<std::size_t>(f.var)] = f.value;
    return State(std::move(values));
}

ActionModel read_actions(const Node &node, const Variables &vars) {
    ActionModel model(vars, {});
    for (const Node &a : node.items()) {
        a.only_keys({"name", "pre", "eff"});
        std::string name = a.at("name").str();
        PartialAssignment pre = read_assignment(a.at("pre"), vars);
        PartialAssignment eff = read_assignment(a.at("eff"), vars);
        if (model.find(name))
            a.fail("duplicate action name \"" + name + "\"");
        try {
            model.add(Action(std::move(name), std::move(pre), std::move(eff)));
        } catch (const ValidationError &e) {
            a.fail(e.what());
        }
    }
    return model;
}

// ---------------------------------------------------------------------------
// Writing.

json write_variables(const Variables &vars) {
    json arr = json::array();
    for (const VariableSpec &v : vars)
        arr.push_back({{"name", v.name}, {"values", v.value_names}});
    return arr;
}

json write_assignment(const PartialAssignment &pa, const Variables &vars) {
    json obj = json::object();
    for (const Fact &f : pa) {
        const VariableSpec &v = vars.at(static_cast<std::size_t>(f.var));
        obj[v.name] = v.value_names.at(static_cast<std::size_t>(f.value));
    }
    return obj;
}

json write_state(const State &s, const Variables &vars) {
    return write_assignment(s.as_assignment(), vars);
}

json write_actions(const ActionModel &model) {
    json arr = json::array();
    for (const auto &[name, a] : model.actions()) {
        arr.push_back({{"name", name},
                       {"pre", write_assignment(a.pre(), model.variables())},
                       {"eff", write_assignment(a.eff(), model.variables())}});
    }
    return arr;
}

std::string canonical(const json &j) {
    return j.dump(2) + "\n";
}

} // namespace

// ---------------------------------------------------------------------------

ActionModel parse_domain(std::string_view text) {
    const json j = parse_json(text);
    const Node root(j, "$");
    check_header(root, {"domain", "problem"});
    if (root.raw().at("kind") == "domain")
        root.only_keys({"schema_version", "kind", "variables", "actions"});
    Variables vars = read_variables(root.at("variables"));
    return read_actions(root.at("actions"), vars);
}

std::string serialize_domain(const ActionModel &model) {
    json j = {{"schema_version", file_schema_version},
              {"kind", "domain"},
              {"variables", write_variables(model.variables())},
              {"actions", write_actions(model)}};
    return canonical(j);
}

std::string serialize_variables(const Variables &vars) {
    check_variables(vars);
    json j = {{"schema_version", file_schema_version},
              {"kind", "variables"},
              {"variables", write_variables(vars)}};
    return canonical(j);
}

Variables parse_variables(std::string_view text) {
    const json j = parse_json(text);
    const Node root(j, "$");
    check_header(root, {"domain", "problem", "learned-model", "variables"});
    return read_variables(root.at("variables"));
}

ProblemFile parse_problem(std::string_view text) {
    const json j = parse_json(text);
    const Node root(j, "$");
    check_header(root, {"problem"});
    root.only_keys({"schema_version", "kind", "variables", "actions", "init", "goal", "provenance"});
    Variables vars = read_variables(root.at("variables"));
    ActionModel model = read_actions(root.at("actions"), vars);
    State init = read_state(root.at("init"), vars);
    PartialAssignment goal = read_assignment(root.at("goal"), vars);
    ProblemFile out{Problem(std::move(model), std::move(init), std::move(goal)), {}};
    if (root.has("provenance"))
        out.provenance = root.at("provenance").str();
    return out;
}

std::string serialize_problem(const Problem &prob, const std::string &provenance) {
    const Variables &vars = prob.model.variables();
    json j = {{"schema_version", file_schema_version},
              {"kind", "problem"},
              {"variables", write_variables(vars)},
              {"actions", write_actions(prob.model)},
              {"init", write_state(prob.init, vars)},
              {"goal", write_assignment(prob.goal, vars)}};
    if (!provenance.empty())
        j["provenance"] = provenance;
    return canonical(j);
}

std::vector<Trajectory> parse_trajectories(std::string_view text, const Variables &vars,
                                           const ActionModel *reference) {
    std::vector<Trajectory> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) {
            if (end == text.size())
                break;
            continue;
        }
        const std::string where = "line " + std::to_string(line_no);
        json j;
        try {
            j = json::parse(line.begin(), line.end());
        } catch (const json::parse_error &e) {
            throw ParseError(where, e.what());
        }
        const Node root(j, where + " $");
        root.only_keys({"id", "states", "actions", "goal"});
        Trajectory t;
        t.id = root.at("id").str();
        for (const Node &s : root.at("states").items())
            t.states.push_back(read_state(s, vars));
        for (const Node &a : root.at("actions").items())
            t.actions.push_back(a.str());
        if (root.has("goal"))
            t.goal = read_assignment(root.at("goal"), vars);

        try {
            if (reference)
                check_trajectory_consistent(*reference, t);
            else
                check_trajectory(vars, t);
        } catch (const ConsistencyError &e) {
            throw ConsistencyError(e.step(), where + ", trajectory '" + t.id + "': " + e.what());
        } catch (const StructureError &e) {
            throw StructureError(where + ": " + e.what());
        }
        out.push_back(std::move(t));
        if (end == text.size())
            break;
    }
    return out;
}

std::string serialize_trajectories(std::span<const Trajectory> trajs, const Variables &vars) {
    std::string out;
    for (const Trajectory &t : trajs) {
        check_trajectory(vars, t);
        json states = json::array();
        for (const State &s : t.states)
            states.push_back(write_state(s, vars));
        json j = {{"id", t.id}, {"states", std::move(states)}, {"actions", t.actions}};
        if (t.goal)
            j["goal"] = write_assignment(*t.goal, vars);
        out += j.dump();
        out += '\n';
    }
    return out;
}

LearnedModel parse_learned_model(std::string_view text) {
    const json j = parse_json(text);
    const Node root(j, "$");
    check_header(root, {"learned-model"});
    root.only_keys({"schema_version", "kind", "variables", "actions"});
    LearnedModel lm;
    lm.variables = read_variables(root.at("variables"));
    for (const Node &a : root.at("actions").items()) {
        a.only_keys({"name", "pre_upper", "eff_lower", "eff_upper", "observations"});
        LearnedAction la;
        la.name = a.at("name").str();
        la.pre_upper = read_assignment(a.at("pre_upper"), lm.variables);
        la.eff_lower = read_assignment(a.at("eff_lower"), lm.variables);
        if (a.has("eff_upper"))
            la.eff_upper = read_assignment(a.at("eff_upper"), lm.variables);
        la.observations = a.at("observations").uint();
        if (la.observations == 0)
            a.at("observations").fail("an observed action needs at least one observation");
        for (const Fact &f : la.eff_lower) {
            if (la.pre_upper.contains(f))
                a.fail("eff_lower restates a pre_upper fact; a changed value cannot be shared "
                       "by every pre-state");
        }
        if (!la.eff_lower.subset_of(la.eff_upper) && a.has("eff_upper"))
            a.fail("eff_lower is not contained in eff_upper");
        if (!lm.actions.emplace(la.name, la).second)
            a.fail("duplicate action name \"" + la.name + "\"");
    }
    return lm;
}

std::string serialize_learned_model(const LearnedModel &lm) {
    json actions = json::array();
    for (const auto &[name, la] : lm.actions) {
        actions.push_back({{"name", name},
                           {"pre_upper", write_assignment(la.pre_upper, lm.variables)},
                           {"eff_lower", write_assignment(la.eff_lower, lm.variables)},
                           {"eff_upper", write_assignment(la.eff_upper, lm.variables)},
                           {"observations", la.observations}});
    }
    json j = {{"schema_version", file_schema_version},
              {"kind", "learned-model"},
              {"variables", write_variables(lm.variables)},
              {"actions", std::move(actions)}};
    return canonical(j);
}

Plan parse_plan(std::string_view text) {
    Plan plan;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == ';')
            continue;
        auto last = line.find_last_not_of(" \t");
        plan.steps.push_back(line.substr(first, last - first + 1));
    }
    return plan;
}

std::string serialize_plan(const Plan &plan) {
    std::string out;
    for (const std::string &s : plan.steps)
        out += s + "\n";
    out += "; cost = " + std::to_string(plan.size()) + " (unit cost)\n";
    return out;
}

namespace {
std::string sas_token(const std::string &s) {
    std::string out = s;
    for (char &c : out) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r')
            c = '_';
    }
    return out;
}
} // namespace

std::string write_sas(const Problem &prob) {
    const Variables &vars = prob.model.variables();
    check_state(vars, prob.init);
    check_assignment(vars, prob.goal);

    std::ostringstream out;
    out << "begin_version\n3\nend_version\n";
    out << "begin_metric\n0\nend_metric\n";
    out << vars.size() << "\n";
    for (const VariableSpec &v : vars) {
        out << "begin_variable\n" << sas_token(v.name) << "\n-1\n" << v.domain_size() << "\n";
        for (const std::string &val : v.value_names)
            out << "Atom " << sas_token(v.name) << "(" << sas_token(val) << ")\n";
        out << "end_variable\n";
    }
    out << "0\n";
    out << "begin_state\n";
    for (ValueId v : prob.init.values())
        out << v << "\n";
    out << "end_state\n";
    out << "begin_goal\n" << prob.goal.size() << "\n";
    for (const Fact &f : prob.goal)
        out << f.var << " " << f.value << "\n";
    out << "end_goal\n";
    out << prob.model.num_actions() << "\n";
    for (const auto &[name, a] : prob.model.actions()) {
        std::vector<Fact> prevail;
        for (const Fact &f : a.pre()) {
            if (!a.eff().has_var(f.var))
                prevail.push_back(f);
        }
        out << "begin_operator\n" << name << "\n" << prevail.size() << "\n";
        for (const Fact &f : prevail)
            out << f.var << " " << f.value << "\n";
        out << a.eff().size() << "\n";
        for (const Fact &f : a.eff()) {
            auto pre = a.pre().get(f.var);
            out << "0 " << f.var << " " << (pre ? *pre : -1) << " " << f.value << "\n";
        }
        out << "1\nend_operator\n";
    }
    out << "0\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// CSV

namespace {

const std::vector<std::string> &csv_columns() {
    static const std::vector<std::string> cols = {
        "schema_version",   "label",        "m",           "run",
        "observed_actions", "eval_instances", "solvable",  "solved",
        "plans_found",      "unsolved_solvable", "unsafe_plans", "resource_limits",
        "solve_rate",       "plan_rate",    "mean_plan_length", "mu_hat"};
    return cols;
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_double(double x) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, p);
}

std::vector<std::vector<std::string>> parse_csv_rows(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, field_started = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"' && !field_started) {
            quoted = true;
            field_started = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            field_started = false;
        } else if (c == '\r' || c == '\n') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n')
                ++i;
            row.push_back(std::move(field));
            field.clear();
            field_started = false;
            rows.push_back(std::move(row));
            row.clear();
        } else {
            field += c;
            field_started = true;
        }
    }
    if (quoted)
        throw ParseError("csv", "unterminated quoted field");
    if (field_started || !row.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

template <typename T>
T parse_number(const std::string &s, const std::string &where) {
    T value{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ParseError(where, "malformed number \"" + s + "\"");
    return value;
}

} // namespace

std::string write_results_csv(std::span<const ExperimentRecord> records, CsvOptions opts) {
    std::string out;
    const auto &cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i)
        out += (i ? "," : "") + cols[i];
    if (opts.include_timing)
        out += ",wall_seconds";
    out += "\r\n";
    for (const ExperimentRecord &r : records) {
        std::vector<std::string> f = {std::to_string(results_schema_version),
                                      csv_field(r.label),
                                      std::to_string(r.m),
                                      std::to_string(r.run),
                                      std::to_string(r.observed_actions),
                                      std::to_string(r.eval_instances),
                                      std::to_string(r.solvable),
                                      std::to_string(r.solved),
                                      std::to_string(r.plans_found),
                                      std::to_string(r.unsolved_solvable),
                                      std::to_string(r.unsafe_plans),
                                      std::to_string(r.resource_limits),
                                      format_double(r.solve_rate),
                                      format_double(r.plan_rate),
                                      format_double(r.mean_plan_length),
                                      format_double(r.mu_hat)};
        if (opts.include_timing)
            f.push_back(format_double(r.wall_seconds));
        for (std::size_t i = 0; i < f.size(); ++i)
            out += (i ? "," : "") + f[i];
        out += "\r\n";
    }
    return out;
}

std::vector<ExperimentRecord> parse_results_csv(std::string_view text) {
    auto rows = parse_csv_rows(text);
    if (rows.empty())
        throw ParseError("csv line 1", "missing header");
    std::vector<std::string> expected = csv_columns();
    bool timing = rows[0].size() == expected.size() + 1;
    if (timing)
        expected.push_back("wall_seconds");
    if (rows[0] != expected)
        throw ParseError("csv line 1", "unexpected header");
    std::vector<ExperimentRecord> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto &f = rows[i];
        const std::string where = "csv line " + std::to_string(i + 1);
        if (f.size() != expected.size())
            throw ParseError(where, "expected " + std::to_string(expected.size()) + " fields");
        if (parse_number<int>(f[0], where) != results_schema_version)
            throw ParseError(where, "unsupported schema_version " + f[0]);
        ExperimentRecord r;
        r.label = f[1];
        r.m = parse_number<std::size_t>(f[2], where);
        r.run = parse_number<std::size_t>(f[3], where);
        r.observed_actions = parse_number<std::size_t>(f[4], where);
        r.eval_instances = parse_number<std::size_t>(f[5], where);
        r.solvable = parse_number<std::size_t>(f[6], where);
        r.solved = parse_number<std::size_t>(f[7], where);
        r.plans_found = parse_number<std::size_t>(f[8], where);
        r.unsolved_solvable = parse_number<std::size_t>(f[9], where);
        r.unsafe_plans = parse_number<std::size_t>(f[10], where);
        r.resource_limits = parse_number<std::size_t>(f[11], where);
        r.solve_rate = parse_number<double>(f[12], where);
        r.plan_rate = parse_number<double>(f[13], where);
        r.mean_plan_length = parse_number<double>(f[14], where);
        r.mu_hat = parse_number<double>(f[15], where);
        if (timing)
            r.wall_seconds = parse_number<double>(f[16], where);
        out.push_back(std::move(r));
    }
    return out;
}

std::string serialize_safety_report(const SafetyReport &report, const Variables &vars) {
    json mode = {{"kind", report.mode.kind == AuditMode::Kind::exhaustive ? "exhaustive" : "sampled"}};
    if (report.mode.kind == AuditMode::Kind::exhaustive) {
        mode["state_cap"] = report.mode.state_cap;
    } else {
        mode["samples"] = report.mode.samples;
        mode["seed"] = report.mode.seed;
    }
    json j = {{"schema_version", file_schema_version},
              {"kind", "safety-report"},
              {"safe", report.safe},
              {"states_checked", report.states_checked},
              {"mode", std::move(mode)}};
    if (report.counterexample) {
        j["counterexample"] = {{"state", write_state(report.counterexample->state, vars)},
                               {"action", report.counterexample->action},
                               {"violation", to_string(report.counterexample->kind)}};
    }
    return canonical(j);
}

std::string serialize_bounds_report(const BoundsReport &report, const Variables &vars) {
    json violations = json::array();
    for (const BoundViolation &v : report.violations) {
        violations.push_back({{"action", v.action},
                              {"kind", to_string(v.kind)},
                              {"fact", write_assignment(PartialAssignment{v.fact}, vars)}});
    }
    json j = {{"schema_version", file_schema_version},
              {"kind", "bounds-report"},
              {"actions_checked", report.actions_checked},
              {"clean", report.clean()},
              {"violations", std::move(violations)}};
    return canonical(j);
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file_atomic(const std::string &path, std::string_view contents) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::path target(path);
    const fs::file_status st = fs::status(target, ec);
    if (fs::exists(st) && !fs::is_regular_file(st)) {
        // Devices and pipes (e.g. /dev/stdout) cannot be renamed over.
        std::ofstream out(target, std::ios::binary);
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out)
            throw Error("failed writing '" + path + "'");
        return;
    }
    if (fs::is_symlink(fs::symlink_status(target, ec)))
        target = fs::canonical(target);

    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot write '" + tmp.string() + "'");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            fs::remove(tmp, ec);
            throw Error("failed writing '" + tmp.string() + "'");
        }
    }
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error("cannot move output into place at '" + path + "'");
    }
}

} // namespace safeplan
