#include <stdexcept>

#include "rules_internal.hpp"
#include "rvsc/text.hpp"

namespace rvsc::rules {

namespace {

using namespace detail;
using model::Cfg;

struct IndexedPath {
  std::vector<std::size_t> nodes;
  std::vector<std::size_t> edges;
  bool complete;
};

struct Outcome {
  Status status = Status::kSatisfied;
  Evidence evidence;
};

std::vector<std::string> Prefix(const Cfg &cfg, const IndexedPath &p, std::size_t begin, std::size_t end) {
  std::vector<std::string> out;
  for (std::size_t i = begin; i <= end; ++i) out.push_back(cfg.id(p.nodes[i]));
  return out;
}

// b-occurrence with no earlier a-occurrence on the path.
Outcome CheckOrdering(const Cfg &cfg, const std::vector<const IndexedPath *> &paths, const std::vector<bool> &as,
                      const std::vector<bool> &bs) {
  for (const auto *p : paths) {
    for (std::size_t i = 0; i < p->nodes.size(); ++i) {
      std::size_t v = p->nodes[i];
      if (as[v]) break;
      if (bs[v]) return {Status::kViolated, {Prefix(cfg, *p, 0, i), "path reaches the later activity first"}};
    }
  }
  return {};
}

// Traversal of a branch edge of interest followed by an a-occurrence before the
// next d-occurrence. Returns the matching segment, or empty.
std::vector<std::string> FindBranchSegment(const Cfg &cfg, const std::vector<const IndexedPath *> &paths,
                                           const std::vector<bool> &branch_edges, const std::vector<bool> &as,
                                           const std::vector<bool> &ds) {
  for (const auto *p : paths) {
    for (std::size_t i = 0; i < p->edges.size(); ++i) {
      if (!branch_edges[p->edges[i]]) continue;
      for (std::size_t j = i + 1; j < p->nodes.size(); ++j) {
        std::size_t v = p->nodes[j];
        if (ds[v]) break;
        if (as[v]) return Prefix(cfg, *p, i, j);
      }
    }
  }
  return {};
}

Outcome CheckBranch(const Cfg &cfg, const std::vector<const IndexedPath *> &paths, const std::string &activity,
                    const std::string &decision, bool positive) {
  auto ds_nodes = cfg.nodes_labeled(decision);
  auto as = mask_of(cfg, cfg.nodes_labeled(activity));
  auto ds = mask_of(cfg, ds_nodes);
  std::vector<bool> own(cfg.model().edges.size(), false);
  std::vector<bool> other(cfg.model().edges.size(), false);
  for (const auto &g : branch_targets(cfg, ds_nodes, positive)) own[g.edge] = true;
  for (const auto &g : branch_targets(cfg, ds_nodes, !positive)) other[g.edge] = true;

  auto leak = FindBranchSegment(cfg, paths, other, as, ds);
  if (!leak.empty()) return {Status::kViolated, {leak, "activity occurs on the opposite branch"}};
  auto witness = FindBranchSegment(cfg, paths, own, as, ds);
  if (witness.empty()) {
    std::vector<std::string> edge;
    for (const auto *p : paths) {
      for (std::size_t i = 0; i < p->edges.size() && edge.empty(); ++i)
        if (own[p->edges[i]]) edge = Prefix(cfg, *p, i, i + 1);
      if (!edge.empty()) break;
    }
    return {Status::kViolated, {edge, "no path follows the branch into the activity"}};
  }
  return {Status::kSatisfied, {witness, "branch witness"}};
}

Outcome Check(const Rule &rule, const Cfg &cfg, const std::vector<const IndexedPath *> &paths) {
  if (const auto *r = std::get_if<AfterTrue>(&rule.body)) return CheckBranch(cfg, paths, r->activity, r->decision, true);
  if (const auto *r = std::get_if<AfterFalse>(&rule.body))
    return CheckBranch(cfg, paths, r->activity, r->decision, false);
  auto [first, second] = ordering_pair(rule.body);
  return CheckOrdering(cfg, paths, mask_of(cfg, cfg.nodes_labeled(first)), mask_of(cfg, cfg.nodes_labeled(second)));
}

}  // namespace

std::vector<Verdict> evaluate_by_paths(const std::vector<Rule> &rules, const model::ProcessModel &model,
                                       int edge_budget) {
  if (edge_budget < 2) throw std::invalid_argument("path oracle needs an edge budget of at least 2");
  Context context(model);
  const Cfg &cfg = context.cfg();

  std::vector<IndexedPath> paths;
  for (const auto &p : model::enumerate_paths(cfg, edge_budget)) {
    IndexedPath ip{{}, p.edges, p.complete};
    for (const auto &id : p.nodes) ip.nodes.push_back(cfg.index(id));
    paths.push_back(std::move(ip));
  }
  std::vector<const IndexedPath *> all;
  std::vector<const IndexedPath *> complete;
  for (const auto &p : paths) {
    all.push_back(&p);
    if (p.complete) complete.push_back(&p);
  }
  bool truncated = complete.size() != all.size();

  std::vector<Verdict> out;
  for (const auto &rule : rules) {
    if (auto v = unresolved(rule, cfg)) {
      out.push_back(*v);
      continue;
    }
    if (std::holds_alternative<Role>(rule.body) || std::holds_alternative<Parallel>(rule.body)) {
      out.push_back(structural(rule, context));
      continue;
    }
    Outcome whole = Check(rule, cfg, all);
    if (truncated && Check(rule, cfg, complete).status != whole.status) {
      out.push_back({rule.id, Status::kInconclusive, {{}, "budget-inconclusive: truncated paths change the outcome"}});
      continue;
    }
    out.push_back({rule.id, whole.status, std::move(whole.evidence)});
  }
  sort_by_rule_id(out);
  return out;
}

}  // namespace rvsc::rules
