#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>

#include "lexer.hpp"
#include "rvsc/graph.hpp"
#include "rvsc/text.hpp"

namespace rvsc::kg {

std::string render_value(const Value &value) {
  return std::visit(
      [](const auto &v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else {
          char buf[64];
          auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
          std::string s(buf, p);
          if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
          return s;
        }
      },
      value);
}

std::string value_literal(const Value &value) {
  if (const auto *s = std::get_if<std::string>(&value)) {
    std::string out = "\"";
    for (char c : *s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
      }
    }
    return out + "\"";
  }
  return render_value(value);
}

std::size_t PropertyGraph::add_node(std::string id, std::set<std::string> labels, Properties props) {
  if (id.empty()) throw GraphError("node id must not be empty");
  if (node_ids_.count(id)) throw GraphError("duplicate node id '" + id + "'");
  for (const auto &l : labels)
    if (l.empty()) throw GraphError("empty label on node '" + id + "'");
  std::size_t index = nodes_.size();
  node_ids_.emplace(id, index);
  nodes_.push_back({std::move(id), std::move(labels), std::move(props)});
  out_.emplace_back();
  in_.emplace_back();
  return index;
}

std::size_t PropertyGraph::add_relationship(std::string type, std::size_t from, std::size_t to, Properties props,
                                            std::string id) {
  if (type.empty()) throw GraphError("relationship type must not be empty");
  if (from >= nodes_.size() || to >= nodes_.size()) throw GraphError("relationship endpoint out of range");
  if (id.empty()) {
    do id = "r" + std::to_string(next_rel_++);
    while (rel_ids_.count(id));
  } else if (rel_ids_.count(id)) {
    throw GraphError("duplicate relationship id '" + id + "'");
  }
  std::size_t index = rels_.size();
  rel_ids_.insert(id);
  rels_.push_back({std::move(id), std::move(type), from, to, std::move(props)});
  out_[from].push_back(index);
  in_[to].push_back(index);
  return index;
}

std::optional<std::size_t> PropertyGraph::find_node(std::string_view id) const {
  auto it = node_ids_.find(id);
  if (it == node_ids_.end()) return std::nullopt;
  return it->second;
}

std::string PropertyGraph::display_name(std::size_t node) const {
  const auto &n = nodes_.at(node);
  auto it = n.props.find("name");
  if (it != n.props.end())
    if (const auto *s = std::get_if<std::string>(&it->second)) return *s;
  return n.id;
}

namespace {

using detail::Cursor;
using detail::Token;

struct NodeSpec {
  std::optional<Token> alias;
  std::set<std::string> labels;
  Properties props;
  Token open;
};

class ScriptReader {
 public:
  explicit ScriptReader(std::string_view text) : cur_(text, detail::tokenize(text), true) {}

  PropertyGraph Run() {
    for (;;) {
      while (cur_.accept_punct(";")) {
      }
      if (cur_.at_end()) break;
      bool merge = false;
      if (cur_.accept_keyword("MERGE")) merge = true;
      else if (!cur_.accept_keyword("CREATE")) cur_.fail(cur_.peek(), "expected CREATE or MERGE");
      do Pattern(merge);
      while (cur_.accept_punct(","));
      if (!cur_.at_end() && !cur_.is_punct(";") && !cur_.is_keyword("CREATE") && !cur_.is_keyword("MERGE"))
        cur_.fail(cur_.peek(), "unexpected '" + cur_.peek().text + "'");
    }
    return std::move(graph_);
  }

 private:
  NodeSpec ReadNode() {
    NodeSpec spec{std::nullopt, {}, {}, cur_.expect_punct("(")};
    if (cur_.peek().kind == detail::Tok::kIdent) spec.alias = cur_.next();
    while (cur_.accept_punct(":")) spec.labels.insert(cur_.expect_ident("label").text);
    if (cur_.is_punct("{")) spec.props = cur_.property_map();
    cur_.expect_punct(")");
    return spec;
  }

  std::size_t Resolve(const NodeSpec &spec, bool merge, bool standalone) {
    bool has_body = !spec.labels.empty() || !spec.props.empty();
    if (spec.alias) {
      auto known = aliases_.find(spec.alias->text);
      if (known != aliases_.end()) {
        if (has_body || standalone) cur_.fail(*spec.alias, "duplicate alias '" + spec.alias->text + "'");
        return known->second;
      }
      if (!has_body && !standalone) cur_.fail(*spec.alias, "unknown alias '" + spec.alias->text + "'");
    } else if (!has_body) {
      cur_.fail(spec.open, "node pattern needs an alias, a label or properties");
    }
    if (merge) {
      for (std::size_t i = 0; i < graph_.node_count(); ++i) {
        const auto &n = graph_.nodes()[i];
        if (n.labels == spec.labels && n.props == spec.props) {
          if (spec.alias) aliases_.emplace(spec.alias->text, i);
          return i;
        }
      }
    }
    std::string id;
    if (spec.alias) {
      id = spec.alias->text;
      if (graph_.find_node(id)) cur_.fail(*spec.alias, "duplicate alias '" + id + "'");
    } else {
      do id = "_n" + std::to_string(++anonymous_);
      while (graph_.find_node(id));
    }
    std::size_t index = graph_.add_node(id, spec.labels, spec.props);
    if (spec.alias) aliases_.emplace(spec.alias->text, index);
    return index;
  }

  void Pattern(bool merge) {
    NodeSpec first = ReadNode();
    bool standalone = !cur_.is_punct("-") && !cur_.is_punct("<");
    std::size_t left = Resolve(first, merge, standalone);
    while (cur_.is_punct("-") || cur_.is_punct("<")) {
      bool incoming = cur_.accept_punct("<");
      cur_.expect_punct("-");
      cur_.expect_punct("[");
      if (cur_.peek().kind == detail::Tok::kIdent) cur_.next();
      cur_.expect_punct(":");
      std::string type = cur_.expect_ident("relationship type").text;
      Properties props;
      if (cur_.is_punct("{")) props = cur_.property_map();
      cur_.expect_punct("]");
      cur_.expect_punct("-");
      if (!incoming) cur_.expect_punct(">");
      else if (cur_.is_punct(">")) cur_.fail(cur_.peek(), "relationship cannot point both ways");
      std::size_t right = Resolve(ReadNode(), merge, false);
      std::size_t from = incoming ? right : left;
      std::size_t to = incoming ? left : right;
      bool exists = false;
      if (merge) {
        for (std::size_t r : graph_.outgoing(from)) {
          const auto &rel = graph_.relationships()[r];
          if (rel.to == to && rel.type == type && rel.props == props) exists = true;
        }
      }
      if (!exists) graph_.add_relationship(type, from, to, std::move(props));
      left = right;
    }
  }

  Cursor cur_;
  PropertyGraph graph_;
  std::map<std::string, std::size_t> aliases_;
  std::size_t anonymous_ = 0;
};

bool PlainName(const std::string &s) {
  static const char *kReserved[] = {"CREATE", "MERGE", "MATCH", "WHERE", "RETURN", "AND",  "OR",
                                    "NOT",    "true",  "false", "null",  "AS",     "ORDER", "LIMIT"};
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  for (const char *r : kReserved)
    if (detail::iequals(s, r)) return false;
  return true;
}

std::string Name(const std::string &s) {
  if (PlainName(s)) return s;
  std::string out = "`";
  for (char c : s) out += c == '`' ? std::string("``") : std::string(1, c);
  return out + "`";
}

std::string PropsText(const Properties &props) {
  if (props.empty()) return "";
  std::string out = " {";
  bool first = true;
  for (const auto &[k, v] : props) {
    if (!first) out += ", ";
    first = false;
    out += Name(k) + ": " + value_literal(v);
  }
  return out + "}";
}

}  // namespace

PropertyGraph ingest_script(std::string_view text) { return ScriptReader(text).Run(); }

std::string export_script(const PropertyGraph &graph) {
  std::vector<std::size_t> nodes(graph.node_count());
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = i;
  std::sort(nodes.begin(), nodes.end(),
            [&](std::size_t a, std::size_t b) { return natural_less(graph.nodes()[a].id, graph.nodes()[b].id); });
  std::vector<std::size_t> rels(graph.relationship_count());
  for (std::size_t i = 0; i < rels.size(); ++i) rels[i] = i;
  std::sort(rels.begin(), rels.end(), [&](std::size_t a, std::size_t b) {
    return natural_less(graph.relationships()[a].id, graph.relationships()[b].id);
  });

  std::string out;
  for (std::size_t i : nodes) {
    const auto &n = graph.nodes()[i];
    out += "CREATE (" + Name(n.id);
    for (const auto &l : n.labels) out += ":" + Name(l);
    out += PropsText(n.props) + ")\n";
  }
  for (std::size_t i : rels) {
    const auto &r = graph.relationships()[i];
    out += "CREATE (" + Name(graph.nodes()[r.from].id) + ")-[:" + Name(r.type) + PropsText(r.props) + "]->(" +
           Name(graph.nodes()[r.to].id) + ")\n";
  }
  return out;
}

}  // namespace rvsc::kg
