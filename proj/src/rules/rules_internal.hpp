#pragma once

#include <optional>

#include "rvsc/rules.hpp"

namespace rvsc::rules::detail {

// For before/after/not_before: `first` must precede `second`.
struct OrderingPair {
  std::string first;
  std::string second;
};
OrderingPair ordering_pair(const RuleBody &body);

struct BranchEdge {
  std::size_t decision;
  std::size_t to;
  std::size_t edge;
};
using Guarded = std::vector<BranchEdge>;

// Out-edges of the given decisions whose guard reads yes/true (positive) or
// no/false (negative).
Guarded branch_targets(const model::Cfg &cfg, const std::vector<std::size_t> &decisions, bool positive);

std::vector<bool> mask_of(const model::Cfg &cfg, const std::vector<std::size_t> &nodes);
std::vector<std::string> ids_of(const model::Cfg &cfg, const std::vector<std::size_t> &path);

// Inapplicable verdict when a label resolves to no node (or the decision lacks
// the needed branch); shared by both evaluators so they agree on it.
std::optional<Verdict> unresolved(const Rule &rule, const model::Cfg &cfg);

// Role and Parallel checks.
Verdict structural(const Rule &rule, const Context &context);

void sort_by_rule_id(std::vector<Verdict> &verdicts);

}  // namespace rvsc::rules::detail
