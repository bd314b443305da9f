#include <algorithm>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "query_internal.hpp"

namespace rvsc::kg {

std::string render_cell(const Cell &cell) { return cell ? render_value(*cell) : "null"; }

std::string render_table(const ResultTable &table) {
  std::vector<std::size_t> width(table.columns.size());
  std::vector<std::vector<std::string>> text;
  for (std::size_t c = 0; c < table.columns.size(); ++c) width[c] = table.columns[c].size();
  for (const auto &row : table.rows) {
    auto &line = text.emplace_back();
    for (std::size_t c = 0; c < row.size(); ++c) {
      line.push_back(render_cell(row[c]));
      width[c] = std::max(width[c], line.back().size());
    }
  }
  auto emit = [&](const std::vector<std::string> &cells) {
    std::string out;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) out += " | ";
      out += cells[c];
      if (c + 1 < cells.size()) out += std::string(width[c] - cells[c].size(), ' ');
    }
    return out + "\n";
  };
  std::string out = emit(table.columns);
  std::string rule;
  for (std::size_t c = 0; c < width.size(); ++c) {
    if (c) rule += "-+-";
    rule += std::string(width[c], '-');
  }
  out += rule + "\n";
  for (const auto &line : text) out += emit(line);
  out += "(" + std::to_string(table.rows.size()) + (table.rows.size() == 1 ? " row)\n" : " rows)\n");
  return out;
}

std::string table_to_json(const ResultTable &table) {
  nlohmann::ordered_json j;
  j["columns"] = table.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto &row : table.rows) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto &cell : row) {
      if (!cell) {
        arr.push_back(nullptr);
        continue;
      }
      std::visit([&](const auto &v) { arr.push_back(v); }, *cell);
    }
    j["rows"].push_back(std::move(arr));
  }
  return j.dump() + "\n";
}

namespace detail {

bool labels_match(const NodePattern &pattern, const GraphNode &node) {
  for (const auto &l : pattern.labels)
    if (!node.labels.count(l)) return false;
  return true;
}

bool props_match(const Properties &wanted, const Properties &have) {
  for (const auto &[k, v] : wanted) {
    auto it = have.find(k);
    if (it == have.end() || it->second != v) return false;
  }
  return true;
}

namespace {

enum class Truth { kFalse, kTrue, kUnknown };

struct Slot {
  bool node = true;
  std::size_t pattern = 0;
  std::size_t position = 0;
};

std::map<std::string, Slot> Slots(const QueryAst &q) {
  std::map<std::string, Slot> out;
  for (std::size_t p = 0; p < q.patterns.size(); ++p) {
    const auto &path = q.patterns[p];
    for (std::size_t j = 0; j < path.nodes.size(); ++j)
      if (path.nodes[j].var) out.emplace(*path.nodes[j].var, Slot{true, p, j});
    for (std::size_t k = 0; k < path.rels.size(); ++k)
      if (path.rels[k].var) out.emplace(*path.rels[k].var, Slot{false, p, k});
  }
  return out;
}

class Row {
 public:
  Row(const PropertyGraph &g, const std::map<std::string, Slot> &slots, const Binding &b)
      : g_(g), slots_(slots), b_(b) {}

  const Properties &PropsOf(const std::string &var) const {
    const Slot &s = slots_.at(var);
    if (s.node) return g_.nodes()[b_.node_positions[s.pattern][s.position]].props;
    return g_.relationships()[b_.rel_positions[s.pattern][s.position].front()].props;
  }

  Value Identity(const std::string &var) const {
    const Slot &s = slots_.at(var);
    if (s.node) return g_.nodes()[b_.node_positions[s.pattern][s.position]].id;
    return g_.relationships()[b_.rel_positions[s.pattern][s.position].front()].id;
  }

  Cell Property(const std::string &var, const std::string &key) const {
    const auto &props = PropsOf(var);
    auto it = props.find(key);
    if (it == props.end()) return std::nullopt;
    return it->second;
  }

 private:
  const PropertyGraph &g_;
  const std::map<std::string, Slot> &slots_;
  const Binding &b_;
};

Cell OperandValue(const Operand &o, const Row &row) {
  if (o.var.empty()) return o.literal;
  return row.Property(o.var, o.key);
}

bool IsNumber(const Value &v) { return std::holds_alternative<std::int64_t>(v) || std::holds_alternative<double>(v); }

double AsDouble(const Value &v) {
  if (const auto *i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  return std::get<double>(v);
}

// -1, 0, 1, or nullopt when the values are not comparable.
std::optional<int> Order(const Value &a, const Value &b) {
  if (IsNumber(a) && IsNumber(b)) {
    if (std::holds_alternative<std::int64_t>(a) && std::holds_alternative<std::int64_t>(b)) {
      auto x = std::get<std::int64_t>(a), y = std::get<std::int64_t>(b);
      return x < y ? -1 : (x > y ? 1 : 0);
    }
    double x = AsDouble(a), y = AsDouble(b);
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  if (a.index() != b.index()) return std::nullopt;
  return a < b ? -1 : (b < a ? 1 : 0);
}

Truth Compare(const Expr &e, const Row &row) {
  Cell l = OperandValue(e.lhs, row);
  Cell r = OperandValue(e.rhs, row);
  if (!l || !r) return Truth::kUnknown;
  auto ord = Order(*l, *r);
  if (!ord) {
    if (e.op == CompareOp::kEq) return Truth::kFalse;
    if (e.op == CompareOp::kNe) return Truth::kTrue;
    return Truth::kUnknown;
  }
  bool result = false;
  switch (e.op) {
    case CompareOp::kEq: result = *ord == 0; break;
    case CompareOp::kNe: result = *ord != 0; break;
    case CompareOp::kLt: result = *ord < 0; break;
    case CompareOp::kGt: result = *ord > 0; break;
    case CompareOp::kLe: result = *ord <= 0; break;
    case CompareOp::kGe: result = *ord >= 0; break;
  }
  return result ? Truth::kTrue : Truth::kFalse;
}

Truth Eval(const Expr &e, const Row &row) {
  switch (e.kind) {
    case Expr::Kind::kCompare:
      return Compare(e, row);
    case Expr::Kind::kNot: {
      Truth t = Eval(e.children[0], row);
      return t == Truth::kUnknown ? t : (t == Truth::kTrue ? Truth::kFalse : Truth::kTrue);
    }
    case Expr::Kind::kAnd: {
      Truth a = Eval(e.children[0], row), b = Eval(e.children[1], row);
      if (a == Truth::kFalse || b == Truth::kFalse) return Truth::kFalse;
      return a == Truth::kTrue && b == Truth::kTrue ? Truth::kTrue : Truth::kUnknown;
    }
    case Expr::Kind::kOr: {
      Truth a = Eval(e.children[0], row), b = Eval(e.children[1], row);
      if (a == Truth::kTrue || b == Truth::kTrue) return Truth::kTrue;
      return a == Truth::kFalse && b == Truth::kFalse ? Truth::kFalse : Truth::kUnknown;
    }
  }
  return Truth::kUnknown;
}

bool IsCount(const ReturnItem &item) {
  return item.kind == ReturnItem::Kind::kCount || item.kind == ReturnItem::Kind::kCountStar;
}

Cell Project(const ReturnItem &item, const Row &row) {
  switch (item.kind) {
    case ReturnItem::Kind::kVariable: return row.Identity(item.var);
    case ReturnItem::Kind::kProperty: return row.Property(item.var, item.key);
    default: return std::nullopt;
  }
}

// Sort key for ORDER BY: booleans, numbers, strings, then nulls.
int Rank(const Cell &c) {
  if (!c) return 3;
  if (std::holds_alternative<bool>(*c)) return 0;
  if (IsNumber(*c)) return 1;
  return 2;
}

int KeyCompare(const Cell &a, const Cell &b) {
  int ra = Rank(a), rb = Rank(b);
  if (ra != rb) return ra < rb ? -1 : 1;
  if (!a) return 0;
  return *Order(*a, *b);
}

bool DefaultLess(const std::vector<Cell> &a, const std::vector<Cell> &b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::string x = render_cell(a[i]), y = render_cell(b[i]);
    if (x != y) return x < y;
  }
  return a < b;
}

}  // namespace

ResultTable finish(const QueryAst &query, const PropertyGraph &graph, const std::vector<Binding> &matches) {
  auto slots = Slots(query);
  ResultTable table;
  for (const auto &item : query.returns) table.columns.push_back(item.column);

  bool aggregate = std::any_of(query.returns.begin(), query.returns.end(), IsCount);
  std::map<std::vector<Cell>, std::vector<std::int64_t>> groups;
  for (const auto &b : matches) {
    Row row(graph, slots, b);
    if (query.where && Eval(*query.where, row) != Truth::kTrue) continue;
    std::vector<Cell> cells;
    for (const auto &item : query.returns) cells.push_back(Project(item, row));
    if (!aggregate) {
      table.rows.push_back(std::move(cells));
      continue;
    }
    std::vector<Cell> key;
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (!IsCount(query.returns[i])) key.push_back(cells[i]);
    auto &counts = groups[key];
    counts.resize(query.returns.size(), 0);
    for (std::size_t i = 0; i < query.returns.size(); ++i) {
      const auto &item = query.returns[i];
      if (item.kind == ReturnItem::Kind::kCountStar) ++counts[i];
      else if (item.kind == ReturnItem::Kind::kCount && (item.key.empty() || row.Property(item.var, item.key))) ++counts[i];
    }
  }
  if (aggregate) {
    bool has_keys = std::any_of(query.returns.begin(), query.returns.end(),
                                [](const ReturnItem &i) { return !IsCount(i); });
    if (groups.empty() && !has_keys) groups[{}].resize(query.returns.size(), 0);
    for (const auto &[key, counts] : groups) {
      std::vector<Cell> cells;
      std::size_t k = 0;
      for (std::size_t i = 0; i < query.returns.size(); ++i)
        cells.push_back(IsCount(query.returns[i]) ? Cell(counts[i]) : key[k++]);
      table.rows.push_back(std::move(cells));
    }
  }

  if (query.distinct) {
    std::set<std::vector<Cell>> seen;
    std::vector<std::vector<Cell>> unique;
    for (auto &r : table.rows)
      if (seen.insert(r).second) unique.push_back(std::move(r));
    table.rows = std::move(unique);
  }

  std::sort(table.rows.begin(), table.rows.end(), DefaultLess);
  if (query.order_by) {
    std::size_t c = query.order_by->column;
    bool desc = query.order_by->descending;
    std::stable_sort(table.rows.begin(), table.rows.end(), [&](const auto &a, const auto &b) {
      int cmp = KeyCompare(a[c], b[c]);
      return desc ? cmp > 0 : cmp < 0;
    });
  }
  if (query.limit && table.rows.size() > static_cast<std::size_t>(*query.limit))
    table.rows.resize(static_cast<std::size_t>(*query.limit));
  return table;
}

}  // namespace detail

}  // namespace rvsc::kg
