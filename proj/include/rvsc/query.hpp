#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rvsc/graph.hpp"

namespace rvsc::kg {

// Read-only query subset:
//   MATCH <path> [, <path>...] [WHERE <expr>]
//   RETURN [DISTINCT] <item> [AS name], ... [ORDER BY <column> [ASC|DESC]] [LIMIT n]
// with node patterns (v:Label {k: literal}), relationships -[v:TYPE]-> and
// <-[v:TYPE]-, variable-length -[:TYPE*min..max]-> (1 <= min <= max <= 8),
// comparisons = <> < > <= >= combined with AND / OR / NOT, and count(...).

struct NodePattern {
  std::optional<std::string> var;
  std::vector<std::string> labels;
  Properties props;
};

enum class Direction { kOut, kIn };

struct RelPattern {
  std::optional<std::string> var;
  std::optional<std::string> type;
  Direction direction = Direction::kOut;
  Properties props;
  bool variable_length = false;
  int min_hops = 1;
  int max_hops = 1;
};

// nodes.size() == rels.size() + 1
struct PathPattern {
  std::vector<NodePattern> nodes;
  std::vector<RelPattern> rels;
};

enum class CompareOp { kEq, kNe, kLt, kGt, kLe, kGe };

struct Operand {
  // Property reference var.key, or a literal when `var` is empty.
  std::string var;
  std::string key;
  Value literal;
};

struct Expr {
  enum class Kind { kCompare, kAnd, kOr, kNot } kind = Kind::kCompare;
  CompareOp op = CompareOp::kEq;
  Operand lhs, rhs;
  std::vector<Expr> children;
};

struct ReturnItem {
  enum class Kind { kVariable, kProperty, kCountStar, kCount } kind = Kind::kVariable;
  std::string var;
  std::string key;  // kProperty, or kCount over a property
  std::string column;
};

struct OrderBy {
  std::size_t column = 0;
  bool descending = false;
};

struct QueryAst {
  std::vector<PathPattern> patterns;
  std::optional<Expr> where;
  bool distinct = false;
  std::vector<ReturnItem> returns;
  std::optional<OrderBy> order_by;
  std::optional<std::int64_t> limit;
};

// Throws ParseError (with line/column) for anything outside the subset,
// incomplete patterns and unbound variables.
QueryAst parse_query(std::string_view text);

using Cell = std::optional<Value>;

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  bool operator==(const ResultTable &) const = default;
};

std::string render_cell(const Cell &cell);
// Aligned text table.
std::string render_table(const ResultTable &table);
// {"columns":[...],"rows":[[...],...]}
std::string table_to_json(const ResultTable &table);

class QueryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One complete pattern match: node index per node position and relationship
// indices per relationship position (several for variable-length ones).
struct Binding {
  std::vector<std::vector<std::size_t>> node_positions;
  std::vector<std::vector<std::vector<std::size_t>>> rel_positions;
};

struct ExecuteOptions {
  // Abort with QueryError once this many partial bindings have been explored.
  std::size_t max_bindings = 1'000'000;
  // Called for every complete match before WHERE filtering.
  std::function<void(const Binding &)> on_binding;
};

// Backtracking matcher. No relationship is used twice within one match;
// row order is deterministic.
ResultTable execute(const QueryAst &query, const PropertyGraph &graph, const ExecuteOptions &options = {});

// Oracle with the same contract: enumerates every relationship (and free node)
// assignment and filters. Intended for small graphs.
ResultTable brute_force_match(const QueryAst &query, const PropertyGraph &graph);

// Runs independent queries over one shared graph in parallel. Entries whose
// query fails carry the error message instead of a table.
struct BatchResult {
  std::optional<ResultTable> table;
  std::string error;
};
std::vector<BatchResult> execute_batch(const std::vector<QueryAst> &queries, const PropertyGraph &graph);
// Single-threaded reference for execute_batch.
std::vector<BatchResult> execute_batch_serial(const std::vector<QueryAst> &queries, const PropertyGraph &graph);

}  // namespace rvsc::kg
