#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rvsc/parse_error.hpp"
#include "rvsc/process_model.hpp"

namespace rvsc::rules {

// Ordering and role constraints over activity labels. Labels are matched
// through normalize_label against activity and decision nodes.

struct Before {
  std::string a, b;
  bool operator==(const Before &) const = default;
};
// a after b, i.e. b before a.
struct After {
  std::string a, b;
  bool operator==(const After &) const = default;
};
// `activity` follows the true branch of `decision`.
struct AfterTrue {
  std::string activity, decision;
  bool operator==(const AfterTrue &) const = default;
};
struct AfterFalse {
  std::string activity, decision;
  bool operator==(const AfterFalse &) const = default;
};
// a must not occur before b, i.e. b before a.
struct NotBefore {
  std::string a, b;
  bool operator==(const NotBefore &) const = default;
};
// `activity` is performed by lane `role`.
struct Role {
  std::string role, activity;
  bool operator==(const Role &) const = default;
};
struct Parallel {
  std::string a, b;
  bool operator==(const Parallel &) const = default;
};

using RuleBody = std::variant<Before, After, AfterTrue, AfterFalse, NotBefore, Role, Parallel>;

struct Rule {
  std::string id;
  std::string description;
  RuleBody body;
  bool operator==(const Rule &) const = default;
};

// "before", "after", "after_true", ...
std::string_view form_name(const RuleBody &body);
// DSL spelling of the body, e.g. before("A","B").
std::string render_body(const RuleBody &body);
// render_body with normalized labels; equal for bodies that match in evaluation.
std::string canonical_body(const RuleBody &body);

// One rule per line:  rule <id> ["<description>"] : <form>("X","Y")   # comment
// Throws ParseError on unknown forms, bad quoting, duplicate ids and
// self-referencing ordering rules.
std::vector<Rule> parse_rules(std::string_view text);
std::string serialize_rules(const std::vector<Rule> &rules);

// Labels referenced by a rule, in argument order (role names excluded).
std::vector<std::string> activity_labels(const RuleBody &body);

enum class Status { kSatisfied, kViolated, kInapplicable, kInconclusive };
std::string_view to_string(Status status);

struct Evidence {
  // Node ids forming a path of the model (a single node for role violations,
  // the fork node for parallel witnesses).
  std::vector<std::string> path;
  std::string detail;
  bool operator==(const Evidence &) const = default;
};

struct Verdict {
  std::string rule_id;
  Status status = Status::kSatisfied;
  Evidence evidence;
};

// Evaluates all rules against one model; verdicts are ordered by rule id
// (natural order). Rules are evaluated in parallel.
std::vector<Verdict> evaluate(const std::vector<Rule> &rules, const model::ProcessModel &model);
// Single-threaded reference for evaluate.
std::vector<Verdict> evaluate_serial(const std::vector<Rule> &rules, const model::ProcessModel &model);

// Precomputed per-model state shared by every rule evaluation.
class Context {
 public:
  explicit Context(const model::ProcessModel &model);
  const model::Cfg &cfg() const { return cfg_; }
  const std::map<std::string, std::vector<model::BranchSlot>> &forks() const { return forks_; }

 private:
  model::Cfg cfg_;
  std::map<std::string, std::vector<model::BranchSlot>> forks_;
};

Verdict evaluate_rule(const Rule &rule, const Context &context);

// Independent oracle: literal occurrence checking over enumerate_paths.
// Role and Parallel use the same structural checks as evaluate. Requires
// edge_budget >= 2; may report kInconclusive when truncated paths change the
// outcome.
std::vector<Verdict> evaluate_by_paths(const std::vector<Rule> &rules, const model::ProcessModel &model,
                                       int edge_budget);

// Human-readable report, one block per rule, ordered by rule id, ending with
// the status totals.
std::string explain(const std::vector<Rule> &rules, const std::vector<Verdict> &verdicts,
                    const model::ProcessModel &model);

// [{"rule_id":..,"status":..,"evidence":{"path":[..],"detail":..}}, ...]
std::string verdicts_to_json(const std::vector<Verdict> &verdicts);

}  // namespace rvsc::rules
