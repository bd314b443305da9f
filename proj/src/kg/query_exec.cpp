#include <map>

#include "query_internal.hpp"

namespace rvsc::kg {

namespace {

using detail::labels_match;
using detail::props_match;

class Matcher {
 public:
  Matcher(const QueryAst &q, const PropertyGraph &g, const ExecuteOptions &opt)
      : q_(q), g_(g), opt_(opt), used_(g.relationship_count(), false) {
    current_.node_positions.resize(q.patterns.size());
    current_.rel_positions.resize(q.patterns.size());
    for (std::size_t p = 0; p < q.patterns.size(); ++p) {
      current_.node_positions[p].resize(q.patterns[p].nodes.size());
      current_.rel_positions[p].resize(q.patterns[p].rels.size());
    }
  }

  std::vector<Binding> Run() {
    Pattern(0);
    return std::move(matches_);
  }

 private:
  void Tick() {
    if (++explored_ > opt_.max_bindings)
      throw QueryError("query exceeded the limit of " + std::to_string(opt_.max_bindings) + " intermediate bindings");
  }

  // Binds node position (p, j) to n when it satisfies the pattern; the
  // continuation runs with the binding in place.
  template <typename F>
  void WithNode(std::size_t p, std::size_t j, std::size_t n, F &&then) {
    const NodePattern &np = q_.patterns[p].nodes[j];
    const GraphNode &node = g_.nodes()[n];
    if (!labels_match(np, node) || !props_match(np.props, node.props)) return;
    bool fresh = false;
    if (np.var) {
      auto it = vars_.find(*np.var);
      if (it != vars_.end() && it->second != n) return;
      if (it == vars_.end()) {
        vars_.emplace(*np.var, n);
        fresh = true;
      }
    }
    Tick();
    current_.node_positions[p][j] = n;
    then();
    if (fresh) vars_.erase(*np.var);
  }

  void Pattern(std::size_t p) {
    if (p == q_.patterns.size()) {
      if (opt_.on_binding) opt_.on_binding(current_);
      matches_.push_back(current_);
      return;
    }
    const NodePattern &first = q_.patterns[p].nodes[0];
    if (first.var && vars_.count(*first.var)) {
      std::size_t n = vars_.at(*first.var);
      WithNode(p, 0, n, [&] { Step(p, 0, n); });
      return;
    }
    for (std::size_t n = 0; n < g_.node_count(); ++n) WithNode(p, 0, n, [&] { Step(p, 0, n); });
  }

  bool RelOk(const RelPattern &rp, std::size_t r) const {
    const Relationship &rel = g_.relationships()[r];
    if (used_[r]) return false;
    if (rp.type && rel.type != *rp.type) return false;
    return props_match(rp.props, rel.props);
  }

  const std::vector<std::size_t> &Adjacent(const RelPattern &rp, std::size_t n) const {
    return rp.direction == Direction::kOut ? g_.outgoing(n) : g_.incoming(n);
  }

  std::size_t Far(const RelPattern &rp, std::size_t r) const {
    const Relationship &rel = g_.relationships()[r];
    return rp.direction == Direction::kOut ? rel.to : rel.from;
  }

  void Step(std::size_t p, std::size_t k, std::size_t at) {
    const PathPattern &path = q_.patterns[p];
    if (k == path.rels.size()) {
      Pattern(p + 1);
      return;
    }
    const RelPattern &rp = path.rels[k];
    if (!rp.variable_length) {
      for (std::size_t r : Adjacent(rp, at)) {
        if (!RelOk(rp, r)) continue;
        std::size_t next = Far(rp, r);
        used_[r] = true;
        current_.rel_positions[p][k] = {r};
        WithNode(p, k + 1, next, [&] { Step(p, k + 1, next); });
        used_[r] = false;
      }
      return;
    }
    std::vector<std::size_t> hops;
    Hops(p, k, at, hops);
  }

  void Hops(std::size_t p, std::size_t k, std::size_t at, std::vector<std::size_t> &hops) {
    const RelPattern &rp = q_.patterns[p].rels[k];
    if (static_cast<int>(hops.size()) >= rp.min_hops) {
      current_.rel_positions[p][k] = hops;
      WithNode(p, k + 1, at, [&] { Step(p, k + 1, at); });
    }
    if (static_cast<int>(hops.size()) == rp.max_hops) return;
    for (std::size_t r : Adjacent(rp, at)) {
      if (!RelOk(rp, r)) continue;
      Tick();
      used_[r] = true;
      hops.push_back(r);
      Hops(p, k, Far(rp, r), hops);
      hops.pop_back();
      used_[r] = false;
    }
  }

  const QueryAst &q_;
  const PropertyGraph &g_;
  const ExecuteOptions &opt_;
  std::vector<bool> used_;
  std::map<std::string, std::size_t> vars_;
  Binding current_;
  std::vector<Binding> matches_;
  std::size_t explored_ = 0;
};

}  // namespace

ResultTable execute(const QueryAst &query, const PropertyGraph &graph, const ExecuteOptions &options) {
  return detail::finish(query, graph, Matcher(query, graph, options).Run());
}

std::vector<BatchResult> execute_batch_serial(const std::vector<QueryAst> &queries, const PropertyGraph &graph) {
  std::vector<BatchResult> out(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    try {
      out[i].table = execute(queries[i], graph);
    } catch (const std::exception &e) {
      out[i].error = e.what();
    }
  }
  return out;
}

}  // namespace rvsc::kg
