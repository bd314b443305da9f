#include <omp.h>

#include "rules_internal.hpp"

namespace rvsc::rules {

std::vector<Verdict> evaluate(const std::vector<Rule> &rules, const model::ProcessModel &model) {
  Context context(model);
  std::vector<Verdict> out(rules.size());
  const auto n = static_cast<std::ptrdiff_t>(rules.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = evaluate_rule(rules[static_cast<std::size_t>(i)], context);
  }
  detail::sort_by_rule_id(out);
  return out;
}

}  // namespace rvsc::rules
