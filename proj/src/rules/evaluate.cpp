#include <algorithm>

#include "rules_internal.hpp"
#include "rvsc/text.hpp"

namespace rvsc::rules {

using model::Cfg;
using model::NodeKind;

std::string_view to_string(Status status) {
  switch (status) {
    case Status::kSatisfied: return "satisfied";
    case Status::kViolated: return "violated";
    case Status::kInapplicable: return "inapplicable";
    case Status::kInconclusive: return "inconclusive";
  }
  return "?";
}

Context::Context(const model::ProcessModel &model) : cfg_(model), forks_(model::fork_branch_sets(cfg_)) {}

namespace detail {

OrderingPair ordering_pair(const RuleBody &body) {
  if (const auto *r = std::get_if<Before>(&body)) return {r->a, r->b};
  if (const auto *r = std::get_if<After>(&body)) return {r->b, r->a};
  if (const auto *r = std::get_if<NotBefore>(&body)) return {r->b, r->a};
  return {};
}

Guarded branch_targets(const Cfg &cfg, const std::vector<std::size_t> &decisions, bool positive) {
  Guarded out;
  for (std::size_t d : decisions) {
    if (cfg.node(d).kind != NodeKind::kDecision) continue;
    for (const auto &o : cfg.successors(d)) {
      const auto &guard = cfg.edge(o.edge).guard;
      if (!guard) continue;
      std::string key = normalize_label(*guard);
      bool is_true = key == "yes" || key == "true";
      bool is_false = key == "no" || key == "false";
      if ((positive && is_true) || (!positive && is_false)) out.push_back({d, o.to, o.edge});
    }
  }
  return out;
}

std::vector<bool> mask_of(const Cfg &cfg, const std::vector<std::size_t> &nodes) {
  std::vector<bool> mask(cfg.size(), false);
  for (std::size_t n : nodes) mask[n] = true;
  return mask;
}

std::vector<std::string> ids_of(const Cfg &cfg, const std::vector<std::size_t> &path) {
  std::vector<std::string> out;
  out.reserve(path.size());
  for (std::size_t v : path) out.push_back(cfg.id(v));
  return out;
}

std::optional<Verdict> unresolved(const Rule &rule, const Cfg &cfg) {
  for (const auto &label : activity_labels(rule.body)) {
    if (cfg.nodes_labeled(label).empty())
      return Verdict{rule.id, Status::kInapplicable, {{}, "no activity or decision labeled \"" + label + "\""}};
  }
  if (const auto *r = std::get_if<AfterTrue>(&rule.body)) {
    if (branch_targets(cfg, cfg.nodes_labeled(r->decision), true).empty())
      return Verdict{rule.id, Status::kInapplicable, {{}, "\"" + r->decision + "\" has no yes/true branch"}};
  }
  if (const auto *r = std::get_if<AfterFalse>(&rule.body)) {
    if (branch_targets(cfg, cfg.nodes_labeled(r->decision), false).empty())
      return Verdict{rule.id, Status::kInapplicable, {{}, "\"" + r->decision + "\" has no no/false branch"}};
  }
  return std::nullopt;
}

Verdict structural(const Rule &rule, const Context &context) {
  const Cfg &cfg = context.cfg();
  if (const auto *r = std::get_if<Role>(&rule.body)) {
    std::string want = normalize_label(r->role);
    for (std::size_t n : cfg.nodes_labeled(r->activity)) {
      const auto &lane = cfg.node(n).lane;
      if (!lane || normalize_label(*lane) != want) {
        std::string found = lane ? "\"" + *lane + "\"" : "no lane";
        return {rule.id, Status::kViolated,
                {{cfg.id(n)}, "\"" + r->activity + "\" is performed by " + found + ", expected \"" + r->role + "\""}};
      }
    }
    return {rule.id, Status::kSatisfied, {}};
  }

  const auto &p = std::get<Parallel>(rule.body);
  auto as = cfg.nodes_labeled(p.a);
  auto bs = cfg.nodes_labeled(p.b);
  static const std::vector<model::BranchSlot> kNone;
  auto slots = [&](std::size_t n) -> const std::vector<model::BranchSlot> & {
    auto it = context.forks().find(cfg.id(n));
    return it == context.forks().end() ? kNone : it->second;
  };
  for (std::size_t x : as) {
    for (std::size_t y : bs) {
      for (const auto &sx : slots(x)) {
        for (const auto &sy : slots(y)) {
          if (sx.fork == sy.fork && sx.branch != sy.branch) {
            return {rule.id, Status::kSatisfied,
                    {{sx.fork},
                     "fork " + sx.fork + " runs \"" + p.a + "\" in branch " + std::to_string(sx.branch) +
                         " and \"" + p.b + "\" in branch " + std::to_string(sy.branch)}};
          }
        }
      }
    }
  }
  // Show the sequential path between the two when there is one.
  std::vector<bool> none(cfg.size(), false);
  for (std::size_t x : as) {
    auto path = find_path(cfg, none, x, mask_of(cfg, bs));
    if (path.size() > 1)
      return {rule.id, Status::kViolated, {ids_of(cfg, path), "\"" + p.b + "\" runs after \"" + p.a + "\", not in parallel"}};
  }
  for (std::size_t y : bs) {
    auto path = find_path(cfg, none, y, mask_of(cfg, as));
    if (path.size() > 1)
      return {rule.id, Status::kViolated, {ids_of(cfg, path), "\"" + p.a + "\" runs after \"" + p.b + "\", not in parallel"}};
  }
  return {rule.id, Status::kViolated,
          {{cfg.id(as.front())}, "\"" + p.a + "\" and \"" + p.b + "\" are not in different branches of any fork"}};
}

void sort_by_rule_id(std::vector<Verdict> &verdicts) {
  std::stable_sort(verdicts.begin(), verdicts.end(),
                   [](const Verdict &x, const Verdict &y) { return natural_less(x.rule_id, y.rule_id); });
}

}  // namespace detail

namespace {

using namespace detail;

Verdict EvaluateOrdering(const Rule &rule, const Cfg &cfg) {
  auto [first, second] = ordering_pair(rule.body);
  auto as = cfg.nodes_labeled(first);
  auto bs = cfg.nodes_labeled(second);
  auto blocked = mask_of(cfg, as);
  auto path = find_path(cfg, blocked, cfg.start(), mask_of(cfg, bs));
  if (path.empty()) return {rule.id, Status::kSatisfied, {}};
  std::string detail = std::holds_alternative<NotBefore>(rule.body)
                           ? "\"" + second + "\" must not occur before \"" + first + "\", but this path reaches it first"
                           : "\"" + second + "\" is reachable without passing \"" + first + "\"";
  return {rule.id, Status::kViolated, {ids_of(cfg, path), detail}};
}

Verdict EvaluateBranch(const Rule &rule, const Cfg &cfg, bool positive) {
  std::string activity, decision;
  if (const auto *r = std::get_if<AfterTrue>(&rule.body)) {
    activity = r->activity;
    decision = r->decision;
  } else {
    const auto &f = std::get<AfterFalse>(rule.body);
    activity = f.activity;
    decision = f.decision;
  }
  auto ds = cfg.nodes_labeled(decision);
  auto targets = mask_of(cfg, cfg.nodes_labeled(activity));
  auto blocked = mask_of(cfg, ds);
  const char *own = positive ? "yes" : "no";
  const char *other = positive ? "no" : "yes";

  std::vector<std::size_t> witness;
  for (const auto &g : branch_targets(cfg, ds, positive)) {
    auto path = find_path(cfg, blocked, g.to, targets);
    if (!path.empty()) {
      witness = {g.decision};
      witness.insert(witness.end(), path.begin(), path.end());
      break;
    }
  }
  for (const auto &g : branch_targets(cfg, ds, !positive)) {
    auto path = find_path(cfg, blocked, g.to, targets);
    if (!path.empty()) {
      std::vector<std::size_t> leak{g.decision};
      leak.insert(leak.end(), path.begin(), path.end());
      std::string detail = "\"" + activity + "\" is reachable on the " + other + " branch of \"" + decision + "\"";
      if (witness.empty()) detail += " and not on the " + std::string(own) + " branch";
      return {rule.id, Status::kViolated, {ids_of(cfg, leak), detail}};
    }
  }
  if (witness.empty()) {
    auto first = branch_targets(cfg, ds, positive).front();
    return {rule.id, Status::kViolated,
            {{cfg.id(first.decision), cfg.id(first.to)},
             "\"" + activity + "\" does not follow the " + own + " branch of \"" + decision + "\""}};
  }
  return {rule.id, Status::kSatisfied, {ids_of(cfg, witness), std::string(own) + " branch leads to \"" + activity + "\""}};
}

}  // namespace

Verdict evaluate_rule(const Rule &rule, const Context &context) {
  const Cfg &cfg = context.cfg();
  if (auto v = unresolved(rule, cfg)) return *v;
  switch (rule.body.index()) {
    case 0:  // before
    case 1:  // after
    case 4:  // not_before
      return EvaluateOrdering(rule, cfg);
    case 2:
      return EvaluateBranch(rule, cfg, true);
    case 3:
      return EvaluateBranch(rule, cfg, false);
    default:
      return structural(rule, context);
  }
}

std::vector<Verdict> evaluate_serial(const std::vector<Rule> &rules, const model::ProcessModel &model) {
  Context context(model);
  std::vector<Verdict> out;
  out.reserve(rules.size());
  for (const auto &rule : rules) out.push_back(evaluate_rule(rule, context));
  sort_by_rule_id(out);
  return out;
}

}  // namespace rvsc::rules
