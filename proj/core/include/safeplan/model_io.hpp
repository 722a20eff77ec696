#pragma once

#include "safeplan/experiment_record.hpp"
#include "safeplan/learner.hpp"
#include "safeplan/safety_audit.hpp"
#include "safeplan/sas.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace safeplan {

inline constexpr int file_schema_version = 1;

/*
  On-disk formats (docs/formats.md has the full schemas):

    *.domain.json   variables + ground actions
    *.problem.json  variables + actions + init + goal (+ optional provenance)
    *.model.json    variables + learned bounds per observed action
    *.traj.jsonl    one trajectory object per line
    *.csv           experiment records
    *.sas           translator-style planner input (export only)

  Names, never indices, appear on disk. Serializers emit a canonical form
  (sorted keys, two-space indent, trailing newline; one compact object per
  line for JSON Lines) so that serialize(parse(x)) is a fixed point.

  Syntax errors raise ParseError located by "line L, column C"; schema errors
  raise ParseError located by a JSON path such as "$.actions[2].pre".
*/

ActionModel parse_domain(std::string_view text);
std::string serialize_domain(const ActionModel &model);

// Accepts any of the JSON file kinds above and returns its variables.
// Accepts a variables, domain, problem or learned-model file.
Variables parse_variables(std::string_view text);
std::string serialize_variables(const Variables &vars);

struct ProblemFile {
    Problem problem;
    std::string provenance;
};

ProblemFile parse_problem(std::string_view text);
std::string serialize_problem(const Problem &prob, const std::string &provenance = {});

/*
  Each line is {"id", "states", "actions", "goal"?}. Blank lines are
  skipped. With a reference model every step is also replayed; a mismatch
  raises ConsistencyError naming the step. Errors in a record are re-thrown
  with the line number prepended.
*/
std::vector<Trajectory> parse_trajectories(std::string_view text, const Variables &vars,
                                           const ActionModel *reference = nullptr);
std::string serialize_trajectories(std::span<const Trajectory> trajs, const Variables &vars);

LearnedModel parse_learned_model(std::string_view text);
std::string serialize_learned_model(const LearnedModel &lm);

// One action name per line; lines starting with ';' are comments.
Plan parse_plan(std::string_view text);
std::string serialize_plan(const Plan &plan);

/*
  Fast Downward translator output format, version 3: no mutex groups, unit
  costs, no axioms. Variables in id order, operators in name order.
  Precondition facts on variables the operator does not change become
  prevail conditions; changed variables become pre/post pairs (pre -1 when
  unconstrained).
*/
std::string write_sas(const Problem &prob);

struct CsvOptions {
    bool include_timing = false;
};

// RFC 4180: comma separated, CRLF line ends, fields quoted when they contain
// a comma, quote, CR or LF. Header row always present.
std::string write_results_csv(std::span<const ExperimentRecord> records, CsvOptions opts = {});
std::vector<ExperimentRecord> parse_results_csv(std::string_view text);

std::string serialize_safety_report(const SafetyReport &report, const Variables &vars);
std::string serialize_bounds_report(const BoundsReport &report, const Variables &vars);

// Reads a whole file; throws Error if it cannot be opened.
std::string read_file(const std::string &path);

// Writes to a temporary sibling and renames it over `path`, so readers never
// see partial output.
void write_file_atomic(const std::string &path, std::string_view contents);

} // namespace safeplan
