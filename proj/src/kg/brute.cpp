#include <cmath>
#include <map>
#include <set>

#include "query_internal.hpp"

namespace rvsc::kg {

namespace {

constexpr double kMaxAssignments = 5e7;

// One enumeration axis: a relationship position (choices are relationship
// sequences) or the single node of a relationship-free pattern.
struct Axis {
  std::size_t pattern;
  std::size_t position;
  bool node;
  std::vector<std::vector<std::size_t>> choices;
};

void Sequences(std::size_t rels, int length, std::vector<std::size_t> &prefix,
               std::vector<std::vector<std::size_t>> &out) {
  if (static_cast<int>(prefix.size()) == length) {
    out.push_back(prefix);
    return;
  }
  for (std::size_t r = 0; r < rels; ++r) {
    prefix.push_back(r);
    Sequences(rels, length, prefix, out);
    prefix.pop_back();
  }
}

class Oracle {
 public:
  Oracle(const QueryAst &q, const PropertyGraph &g) : q_(q), g_(g) {}

  std::vector<Binding> Run() {
    double space = 1;
    for (const auto &path : q_.patterns) {
      if (path.rels.empty()) space *= static_cast<double>(g_.node_count());
      for (const auto &rp : path.rels) {
        double seqs = 0;
        for (int len = rp.min_hops; len <= rp.max_hops; ++len)
          seqs += std::pow(static_cast<double>(g_.relationship_count()), len);
        space *= seqs;
      }
    }
    if (space > kMaxAssignments) throw QueryError("oracle search space too large");
    for (std::size_t p = 0; p < q_.patterns.size(); ++p) {
      const auto &path = q_.patterns[p];
      if (path.rels.empty()) {
        Axis a{p, 0, true, {}};
        for (std::size_t n = 0; n < g_.node_count(); ++n) a.choices.push_back({n});
        axes_.push_back(std::move(a));
      }
      for (std::size_t k = 0; k < path.rels.size(); ++k) {
        Axis a{p, k, false, {}};
        const auto &rp = path.rels[k];
        for (int len = rp.min_hops; len <= rp.max_hops; ++len) {
          std::vector<std::size_t> prefix;
          Sequences(g_.relationship_count(), len, prefix, a.choices);
        }
        axes_.push_back(std::move(a));
      }
    }
    for (const auto &a : axes_)
      if (a.choices.empty()) return {};

    std::vector<std::size_t> pick(axes_.size(), 0);
    for (;;) {
      Check(pick);
      std::size_t i = 0;
      while (i < pick.size() && ++pick[i] == axes_[i].choices.size()) pick[i++] = 0;
      if (i == pick.size()) break;
    }
    return std::move(out_);
  }

 private:
  void Check(const std::vector<std::size_t> &pick) {
    Binding b;
    b.node_positions.resize(q_.patterns.size());
    b.rel_positions.resize(q_.patterns.size());
    std::vector<std::vector<std::optional<std::size_t>>> nodes(q_.patterns.size());
    for (std::size_t p = 0; p < q_.patterns.size(); ++p) {
      nodes[p].resize(q_.patterns[p].nodes.size());
      b.rel_positions[p].resize(q_.patterns[p].rels.size());
    }
    std::set<std::size_t> used;
    auto place = [&](std::size_t p, std::size_t j, std::size_t n) {
      if (nodes[p][j] && *nodes[p][j] != n) return false;
      nodes[p][j] = n;
      return true;
    };
    for (std::size_t i = 0; i < axes_.size(); ++i) {
      const Axis &a = axes_[i];
      const auto &choice = a.choices[pick[i]];
      if (a.node) {
        nodes[a.pattern][0] = choice[0];
        continue;
      }
      const RelPattern &rp = q_.patterns[a.pattern].rels[a.position];
      bool out = rp.direction == Direction::kOut;
      std::optional<std::size_t> prev;
      for (std::size_t r : choice) {
        if (!used.insert(r).second) return;
        const Relationship &rel = g_.relationships()[r];
        if (rp.type && rel.type != *rp.type) return;
        if (!detail::props_match(rp.props, rel.props)) return;
        std::size_t tail = out ? rel.from : rel.to;
        std::size_t head = out ? rel.to : rel.from;
        if (prev && *prev != tail) return;
        if (!prev && !place(a.pattern, a.position, tail)) return;
        prev = head;
      }
      if (!place(a.pattern, a.position + 1, *prev)) return;
      b.rel_positions[a.pattern][a.position] = choice;
    }
    std::map<std::string, std::size_t> vars;
    for (std::size_t p = 0; p < q_.patterns.size(); ++p) {
      for (std::size_t j = 0; j < nodes[p].size(); ++j) {
        std::size_t n = *nodes[p][j];
        const NodePattern &np = q_.patterns[p].nodes[j];
        const GraphNode &node = g_.nodes()[n];
        if (!detail::labels_match(np, node) || !detail::props_match(np.props, node.props)) return;
        if (np.var && !vars.emplace(*np.var, n).second && vars.at(*np.var) != n) return;
        b.node_positions[p].push_back(n);
      }
    }
    out_.push_back(std::move(b));
  }

  const QueryAst &q_;
  const PropertyGraph &g_;
  std::vector<Axis> axes_;
  std::vector<Binding> out_;
};

}  // namespace

ResultTable brute_force_match(const QueryAst &query, const PropertyGraph &graph) {
  return detail::finish(query, graph, Oracle(query, graph).Run());
}

}  // namespace rvsc::kg
