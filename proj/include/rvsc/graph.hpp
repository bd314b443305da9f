#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rvsc/parse_error.hpp"

namespace rvsc::kg {

using Value = std::variant<std::string, std::int64_t, double, bool>;
using Properties = std::map<std::string, Value>;

// Cell rendering shared by result tables and scripts: strings raw, integers
// in decimal, floats in shortest round-trip form, booleans as true/false.
std::string render_value(const Value &value);
// Literal form for scripts and queries (strings quoted and escaped).
std::string value_literal(const Value &value);

struct GraphNode {
  std::string id;
  std::set<std::string> labels;
  Properties props;
  bool operator==(const GraphNode &) const = default;
};

struct Relationship {
  std::string id;
  std::string type;
  std::size_t from = 0;  // node indices
  std::size_t to = 0;
  Properties props;
  bool operator==(const Relationship &) const = default;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Labeled nodes with properties and typed directed relationships. Node and
// relationship indices are stable; ids are unique.
class PropertyGraph {
 public:
  // Throws GraphError on duplicate or empty ids and empty label names.
  std::size_t add_node(std::string id, std::set<std::string> labels, Properties props);
  // Id defaults to "r<k>" with k the next free counter value.
  std::size_t add_relationship(std::string type, std::size_t from, std::size_t to, Properties props,
                               std::string id = {});

  const std::vector<GraphNode> &nodes() const { return nodes_; }
  const std::vector<Relationship> &relationships() const { return rels_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t relationship_count() const { return rels_.size(); }

  std::optional<std::size_t> find_node(std::string_view id) const;
  // Relationship indices leaving / entering a node, in creation order.
  const std::vector<std::size_t> &outgoing(std::size_t node) const { return out_[node]; }
  const std::vector<std::size_t> &incoming(std::size_t node) const { return in_[node]; }

  // Primary name: the "name" property when it is a string, the id otherwise.
  std::string display_name(std::size_t node) const;

 private:
  std::vector<GraphNode> nodes_;
  std::vector<Relationship> rels_;
  std::map<std::string, std::size_t, std::less<>> node_ids_;
  std::set<std::string, std::less<>> rel_ids_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::size_t next_rel_ = 1;
};

// Graph-script subset:
//   CREATE (alias:Label {key: value, ...})
//   CREATE (a)-[:TYPE {...}]->(b)      CREATE (a)<-[:TYPE]-(b)
//   MERGE ...                          (reuses an equal node / relationship)
// Statements are separated by newlines or ';'; '//' starts a comment. Node ids
// are the aliases. Throws ParseError on unknown or duplicate aliases and
// malformed literals.
PropertyGraph ingest_script(std::string_view text);

// Deterministic script: nodes by id, then relationships by id (natural order).
// ingest_script(export_script(g)) reproduces ids, labels, types and properties.
std::string export_script(const PropertyGraph &graph);

}  // namespace rvsc::kg
