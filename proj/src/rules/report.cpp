#include <map>

#include <nlohmann/json.hpp>

#include "rvsc/rules.hpp"
#include "rvsc/text.hpp"

namespace rvsc::rules {

namespace {

std::string Phrase(const RuleBody &body) {
  auto q = [](const std::string &s) { return "\"" + s + "\""; };
  return std::visit(
      [&](const auto &r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Before>) return q(r.a) + " must occur before " + q(r.b);
        else if constexpr (std::is_same_v<T, After>) return q(r.a) + " must occur after " + q(r.b);
        else if constexpr (std::is_same_v<T, AfterTrue>) return q(r.activity) + " follows " + q(r.decision) + " = yes";
        else if constexpr (std::is_same_v<T, AfterFalse>) return q(r.activity) + " follows " + q(r.decision) + " = no";
        else if constexpr (std::is_same_v<T, NotBefore>) return q(r.a) + " must not occur before " + q(r.b);
        else if constexpr (std::is_same_v<T, Role>) return q(r.activity) + " is performed by " + q(r.role);
        else return q(r.a) + " runs in parallel to " + q(r.b);
      },
      body);
}

std::string RenderStep(const model::ProcessModel &model, const std::string &id) {
  for (const auto &n : model.nodes) {
    if (n.id != id) continue;
    std::string label = n.label.empty() ? "[" + std::string(model::to_string(n.kind)) + "]" : n.label;
    return n.lane ? *n.lane + ":" + label : label;
  }
  return id;
}

}  // namespace

std::string explain(const std::vector<Rule> &rules, const std::vector<Verdict> &verdicts,
                    const model::ProcessModel &model) {
  std::map<std::string, const Rule *> by_id;
  for (const auto &r : rules) by_id.emplace(r.id, &r);
  std::vector<const Verdict *> ordered;
  for (const auto &v : verdicts) ordered.push_back(&v);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const Verdict *a, const Verdict *b) { return natural_less(a->rule_id, b->rule_id); });

  std::map<Status, std::size_t> counts;
  std::string out;
  for (const Verdict *v : ordered) {
    ++counts[v->status];
    const Rule *rule = by_id.count(v->rule_id) ? by_id.at(v->rule_id) : nullptr;
    out += "Rule " + v->rule_id;
    if (rule && !rule->description.empty()) out += ": " + rule->description;
    out += "\n";
    if (rule) out += "  constraint: " + Phrase(rule->body) + "\n";
    out += "  status: " + std::string(to_string(v->status)) + "\n";
    if (!v->evidence.detail.empty()) out += "  detail: " + v->evidence.detail + "\n";
    if (!v->evidence.path.empty()) {
      out += "  evidence: ";
      for (std::size_t i = 0; i < v->evidence.path.size(); ++i) {
        if (i) out += " -> ";
        out += RenderStep(model, v->evidence.path[i]);
      }
      out += "\n";
    }
    out += "\n";
  }
  if (ordered.empty()) return "0 rules evaluated\n";
  out += std::to_string(ordered.size()) + " rules evaluated: " + std::to_string(counts[Status::kSatisfied]) +
         " satisfied, " + std::to_string(counts[Status::kViolated]) + " violated, " +
         std::to_string(counts[Status::kInapplicable]) + " inapplicable";
  if (counts[Status::kInconclusive]) out += ", " + std::to_string(counts[Status::kInconclusive]) + " inconclusive";
  return out + "\n";
}

std::string verdicts_to_json(const std::vector<Verdict> &verdicts) {
  using nlohmann::ordered_json;
  ordered_json arr = ordered_json::array();
  for (const auto &v : verdicts) {
    ordered_json j = ordered_json::object();
    j["rule_id"] = v.rule_id;
    j["status"] = std::string(to_string(v.status));
    ordered_json ev = ordered_json::object();
    ev["path"] = v.evidence.path;
    ev["detail"] = v.evidence.detail;
    j["evidence"] = std::move(ev);
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

}  // namespace rvsc::rules
