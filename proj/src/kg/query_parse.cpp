#include <map>
#include <set>

#include "lexer.hpp"
#include "rvsc/query.hpp"

namespace rvsc::kg {

namespace {

using detail::Cursor;
using detail::Tok;
using detail::Token;

constexpr int kMaxHops = 8;

class QueryReader {
 public:
  explicit QueryReader(std::string_view text) : cur_(text, detail::tokenize(text), true) {}

  QueryAst Run() {
    if (!cur_.is_keyword("MATCH")) cur_.fail(cur_.peek(), "expected MATCH");
    while (cur_.accept_keyword("MATCH")) {
      do ast_.patterns.push_back(Path());
      while (cur_.accept_punct(","));
    }
    if (cur_.accept_keyword("WHERE")) ast_.where = Or();
    if (cur_.is_keyword("CREATE") || cur_.is_keyword("MERGE") || cur_.is_keyword("DELETE") ||
        cur_.is_keyword("SET") || cur_.is_keyword("REMOVE"))
      cur_.fail(cur_.peek(), "write clauses are not supported");
    cur_.expect_keyword("RETURN");
    ast_.distinct = cur_.accept_keyword("DISTINCT");
    do Item();
    while (cur_.accept_punct(","));
    if (cur_.accept_keyword("ORDER")) {
      cur_.expect_keyword("BY");
      Token at = cur_.peek();
      std::string name;
      // A bare name may be an AS alias rather than a variable.
      if (at.kind == Tok::kIdent && !cur_.is_punct(".", 1) && !cur_.is_punct("(", 1)) name = cur_.next().text;
      else name = Reference();
      std::size_t column = ast_.returns.size();
      for (std::size_t i = 0; i < ast_.returns.size(); ++i)
        if (ast_.returns[i].column == name) column = i;
      if (column == ast_.returns.size()) cur_.fail(at, "ORDER BY must name a returned column");
      bool desc = false;
      if (cur_.accept_keyword("DESC") || cur_.accept_keyword("DESCENDING")) desc = true;
      else if (!cur_.accept_keyword("ASC")) cur_.accept_keyword("ASCENDING");
      ast_.order_by = OrderBy{column, desc};
    }
    if (cur_.accept_keyword("LIMIT")) {
      Token t = cur_.peek();
      if (t.kind != Tok::kInteger) cur_.fail(t, "LIMIT needs a positive integer");
      auto n = std::get<std::int64_t>(cur_.literal());
      if (n < 1) cur_.fail(t, "LIMIT needs a positive integer");
      ast_.limit = n;
    }
    cur_.accept_punct(";");
    if (!cur_.at_end()) cur_.fail(cur_.peek(), "unexpected '" + cur_.peek().text + "'");
    return std::move(ast_);
  }

 private:
  NodePattern Node() {
    NodePattern n;
    cur_.expect_punct("(");
    if (cur_.peek().kind == Tok::kIdent) {
      Token v = cur_.next();
      Declare(v, false);
      n.var = v.text;
    }
    while (cur_.accept_punct(":")) n.labels.push_back(cur_.expect_ident("label").text);
    if (cur_.is_punct("{")) n.props = cur_.property_map();
    cur_.expect_punct(")");
    return n;
  }

  RelPattern Rel() {
    RelPattern r;
    Token start = cur_.peek();
    bool incoming = cur_.accept_punct("<");
    cur_.expect_punct("-");
    if (cur_.accept_punct("[")) {
      std::optional<Token> var;
      if (cur_.peek().kind == Tok::kIdent) var = cur_.next();
      if (cur_.accept_punct(":")) r.type = cur_.expect_ident("relationship type").text;
      if (cur_.is_punct("*")) {
        Token star = cur_.next();
        r.variable_length = true;
        std::optional<std::int64_t> lo, hi;
        if (cur_.peek().kind == Tok::kInteger) lo = std::get<std::int64_t>(cur_.literal());
        if (cur_.accept_punct("..")) {
          if (cur_.peek().kind == Tok::kInteger) hi = std::get<std::int64_t>(cur_.literal());
        } else {
          hi = lo;
        }
        if (!hi) cur_.fail(star, "variable-length relationships need an upper bound");
        std::int64_t min = lo.value_or(1);
        if (min < 1 || *hi < min) cur_.fail(star, "invalid hop range");
        if (*hi > kMaxHops) cur_.fail(star, "hop range is limited to " + std::to_string(kMaxHops));
        r.min_hops = static_cast<int>(min);
        r.max_hops = static_cast<int>(*hi);
        if (var) cur_.fail(*var, "variables on variable-length relationships are not supported");
      }
      if (cur_.is_punct("{")) {
        if (r.variable_length) cur_.fail(cur_.peek(), "properties on variable-length relationships are not supported");
        r.props = cur_.property_map();
      }
      cur_.expect_punct("]");
      if (var) {
        Declare(*var, true);
        r.var = var->text;
      }
    }
    cur_.expect_punct("-");
    bool outgoing = cur_.accept_punct(">");
    if (incoming && outgoing) cur_.fail(start, "relationship cannot point both ways");
    if (!incoming && !outgoing) cur_.fail(start, "undirected relationships are not supported");
    r.direction = incoming ? Direction::kIn : Direction::kOut;
    return r;
  }

  PathPattern Path() {
    PathPattern p;
    p.nodes.push_back(Node());
    while (cur_.is_punct("-") || cur_.is_punct("<")) {
      p.rels.push_back(Rel());
      if (!cur_.is_punct("(")) cur_.fail(cur_.peek(), "incomplete pattern: expected a node after the relationship");
      p.nodes.push_back(Node());
    }
    return p;
  }

  void Declare(const Token &var, bool rel) {
    if (rel) {
      if (node_vars_.count(var.text) || !rel_vars_.insert(var.text).second)
        cur_.fail(var, "variable '" + var.text + "' is already bound");
    } else {
      if (rel_vars_.count(var.text)) cur_.fail(var, "variable '" + var.text + "' is already bound to a relationship");
      node_vars_.insert(var.text);
    }
  }

  void RequireBound(const Token &var) {
    if (!node_vars_.count(var.text) && !rel_vars_.count(var.text))
      cur_.fail(var, "unbound variable '" + var.text + "'");
  }

  Operand Operand_() {
    Operand o;
    const Token &t = cur_.peek();
    if (t.kind == Tok::kIdent && cur_.is_punct(".", 1)) {
      Token var = cur_.next();
      RequireBound(var);
      cur_.next();
      o.var = var.text;
      o.key = cur_.expect_ident("property name").text;
      return o;
    }
    if (t.kind == Tok::kIdent && !t.quoted && !detail::iequals(t.text, "true") && !detail::iequals(t.text, "false") &&
        !detail::iequals(t.text, "null"))
      cur_.fail(t, "expected a property reference or a literal");
    o.literal = cur_.literal();
    return o;
  }

  Expr Compare() {
    Expr e;
    e.kind = Expr::Kind::kCompare;
    e.lhs = Operand_();
    static const std::map<std::string, CompareOp> kOps = {{"=", CompareOp::kEq}, {"<>", CompareOp::kNe},
                                                          {"<", CompareOp::kLt}, {">", CompareOp::kGt},
                                                          {"<=", CompareOp::kLe}, {">=", CompareOp::kGe}};
    const Token &t = cur_.peek();
    auto it = t.kind == Tok::kPunct ? kOps.find(t.text) : kOps.end();
    if (it == kOps.end()) cur_.fail(t, "expected a comparison operator");
    cur_.next();
    e.op = it->second;
    e.rhs = Operand_();
    return e;
  }

  Expr Primary() {
    if (cur_.accept_keyword("NOT")) {
      Expr e;
      e.kind = Expr::Kind::kNot;
      e.children.push_back(Primary());
      return e;
    }
    if (cur_.accept_punct("(")) {
      Expr e = Or();
      cur_.expect_punct(")");
      return e;
    }
    return Compare();
  }

  Expr And() {
    Expr e = Primary();
    while (cur_.accept_keyword("AND")) {
      Expr both;
      both.kind = Expr::Kind::kAnd;
      both.children.push_back(std::move(e));
      both.children.push_back(Primary());
      e = std::move(both);
    }
    return e;
  }

  Expr Or() {
    Expr e = And();
    while (cur_.accept_keyword("OR")) {
      Expr either;
      either.kind = Expr::Kind::kOr;
      either.children.push_back(std::move(e));
      either.children.push_back(And());
      e = std::move(either);
    }
    return e;
  }

  // var | var.key | count(*) | count(var) | count(var.key), rendered as text.
  std::string Reference(ReturnItem *item = nullptr) {
    ReturnItem local;
    ReturnItem &r = item ? *item : local;
    if (cur_.is_keyword("count") && cur_.is_punct("(", 1)) {
      cur_.next();
      cur_.next();
      if (cur_.accept_punct("*")) {
        cur_.expect_punct(")");
        r.kind = ReturnItem::Kind::kCountStar;
        return "count(*)";
      }
      Token var = cur_.expect_ident("variable");
      RequireBound(var);
      r.kind = ReturnItem::Kind::kCount;
      r.var = var.text;
      std::string text = "count(" + var.text;
      if (cur_.accept_punct(".")) {
        r.key = cur_.expect_ident("property name").text;
        text += "." + r.key;
      }
      cur_.expect_punct(")");
      return text + ")";
    }
    Token var = cur_.expect_ident("return item");
    RequireBound(var);
    r.var = var.text;
    if (cur_.accept_punct(".")) {
      r.kind = ReturnItem::Kind::kProperty;
      r.key = cur_.expect_ident("property name").text;
      return var.text + "." + r.key;
    }
    r.kind = ReturnItem::Kind::kVariable;
    return var.text;
  }

  void Item() {
    ReturnItem item;
    Token at = cur_.peek();
    item.column = Reference(&item);
    if (cur_.accept_keyword("AS")) {
      at = cur_.peek();
      item.column = cur_.expect_ident("column name").text;
    }
    for (const auto &r : ast_.returns)
      if (r.column == item.column) cur_.fail(at, "duplicate column '" + item.column + "'");
    ast_.returns.push_back(std::move(item));
  }

  Cursor cur_;
  QueryAst ast_;
  std::set<std::string> node_vars_;
  std::set<std::string> rel_vars_;
};

}  // namespace

QueryAst parse_query(std::string_view text) { return QueryReader(text).Run(); }

}  // namespace rvsc::kg
