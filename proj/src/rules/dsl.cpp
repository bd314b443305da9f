#include <algorithm>
#include <cctype>
#include <set>

#include "rvsc/rules.hpp"
#include "rvsc/text.hpp"

namespace rvsc::rules {

namespace {

struct FormInfo {
  std::string_view name;
  bool distinct_args;  // ordering forms forbid a == b
};

constexpr FormInfo kForms[] = {
    {"before", true}, {"after", true}, {"after_true", false}, {"after_false", false},
    {"not_before", true}, {"role", false}, {"parallel", true},
};

std::string Quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

template <typename F>
std::string RenderWith(const RuleBody &body, F label) {
  return std::visit(
      [&](const auto &r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        std::string x, y;
        if constexpr (std::is_same_v<T, AfterTrue> || std::is_same_v<T, AfterFalse>) {
          x = r.activity;
          y = r.decision;
        } else if constexpr (std::is_same_v<T, Role>) {
          x = r.role;
          y = r.activity;
        } else {
          x = r.a;
          y = r.b;
        }
        return std::string(form_name(body)) + "(" + Quote(label(x)) + "," + Quote(label(y)) + ")";
      },
      body);
}

class LineParser {
 public:
  LineParser(std::string_view line, int number) : s_(line), number_(number) {}

  Rule Parse() {
    Rule rule;
    SkipSpace();
    Word("rule");
    SkipSpace();
    std::size_t id_start = pos_;
    while (pos_ < s_.size() && !std::isspace(Byte()) && s_[pos_] != ':' && s_[pos_] != '"' && s_[pos_] != '#') ++pos_;
    if (pos_ == id_start) Fail("expected rule id after 'rule'");
    rule.id = std::string(s_.substr(id_start, pos_ - id_start));
    SkipSpace();
    if (Peek() == '"') rule.description = QuotedString("description");
    SkipSpace();
    if (Peek() != ':') Fail("expected ':' before the rule form");
    ++pos_;
    SkipSpace();
    std::size_t form_start = pos_;
    while (pos_ < s_.size() && (std::isalnum(Byte()) || s_[pos_] == '_' || s_[pos_] == '-')) ++pos_;
    std::string form(s_.substr(form_start, pos_ - form_start));
    std::replace(form.begin(), form.end(), '-', '_');
    const FormInfo *info = nullptr;
    for (const auto &f : kForms)
      if (f.name == form) info = &f;
    if (!info) {
      pos_ = form_start;
      Fail("unknown rule form '" + form +
           "' (expected before, after, after_true, after_false, not_before, role or parallel)");
    }
    SkipSpace();
    Expect('(');
    SkipSpace();
    std::size_t first_pos = pos_;
    std::string first = QuotedString("first argument");
    SkipSpace();
    Expect(',');
    SkipSpace();
    std::string second = QuotedString("second argument");
    SkipSpace();
    Expect(')');
    SkipSpace();
    if (pos_ < s_.size() && s_[pos_] != '#') Fail("unexpected trailing text");
    if (normalize_label(first).empty() || normalize_label(second).empty()) {
      pos_ = first_pos;
      Fail("rule labels must not be empty");
    }
    if (info->distinct_args && normalize_label(first) == normalize_label(second)) {
      pos_ = first_pos;
      Fail("rule '" + rule.id + "' relates an activity to itself");
    }
    if (form == "before") rule.body = Before{first, second};
    else if (form == "after") rule.body = After{first, second};
    else if (form == "after_true") rule.body = AfterTrue{first, second};
    else if (form == "after_false") rule.body = AfterFalse{first, second};
    else if (form == "not_before") rule.body = NotBefore{first, second};
    else if (form == "role") rule.body = Role{first, second};
    else rule.body = Parallel{first, second};
    return rule;
  }

  [[noreturn]] void Fail(const std::string &message) const {
    throw ParseError(number_, static_cast<int>(pos_) + 1, message, std::string(s_));
  }

 private:
  unsigned char Byte() const { return static_cast<unsigned char>(s_[pos_]); }
  char Peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void SkipSpace() {
    while (pos_ < s_.size() && std::isspace(Byte())) ++pos_;
  }

  void Word(std::string_view w) {
    if (s_.substr(pos_, w.size()) != w) Fail("expected '" + std::string(w) + "'");
    pos_ += w.size();
    if (pos_ < s_.size() && !std::isspace(Byte())) Fail("expected whitespace after '" + std::string(w) + "'");
  }

  void Expect(char c) {
    if (Peek() != c) Fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string QuotedString(const char *what) {
    if (Peek() != '"') Fail(std::string("expected double-quoted ") + what);
    std::size_t open = pos_++;
    std::string out;
    while (pos_ < s_.size()) {
      char c = s_[pos_++];
      if (c == '"') return out;
      if (c == '\\') {
        if (pos_ >= s_.size()) break;
        out += s_[pos_++];
        continue;
      }
      out += c;
    }
    pos_ = open;
    Fail(std::string("unterminated string in ") + what);
  }

  std::string_view s_;
  int number_;
  std::size_t pos_ = 0;
};

// Position of a '#' outside double quotes, or npos.
std::size_t CommentStart(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (quoted && line[i] == '\\') {
      ++i;
      continue;
    }
    if (line[i] == '"') quoted = !quoted;
    if (!quoted && line[i] == '#') return i;
  }
  return std::string_view::npos;
}

}  // namespace

std::string_view form_name(const RuleBody &body) {
  return kForms[body.index()].name;
}

std::string render_body(const RuleBody &body) {
  return RenderWith(body, [](const std::string &s) { return s; });
}

std::string canonical_body(const RuleBody &body) {
  return RenderWith(body, [](const std::string &s) { return normalize_label(s); });
}

std::vector<std::string> activity_labels(const RuleBody &body) {
  return std::visit(
      [](const auto &r) -> std::vector<std::string> {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, AfterTrue> || std::is_same_v<T, AfterFalse>) return {r.activity, r.decision};
        else if constexpr (std::is_same_v<T, Role>) return {r.activity};
        else return {r.a, r.b};
      },
      body);
}

std::vector<Rule> parse_rules(std::string_view text) {
  std::vector<Rule> rules;
  std::set<std::string> ids;
  auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    std::size_t hash = CommentStart(line);
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    LineParser parser(line, static_cast<int>(i) + 1);
    Rule rule = parser.Parse();
    if (!ids.insert(rule.id).second) parser.Fail("duplicate rule id '" + rule.id + "'");
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::string serialize_rules(const std::vector<Rule> &rules) {
  std::string out;
  for (const auto &r : rules) {
    out += "rule " + r.id;
    if (!r.description.empty()) out += " " + Quote(r.description);
    out += " : " + render_body(r.body) + "\n";
  }
  return out;
}

}  // namespace rvsc::rules
