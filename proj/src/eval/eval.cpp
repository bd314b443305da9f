#include "rvsc/eval.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "rvsc/text.hpp"

namespace rvsc::eval {

int percent(std::size_t matched, std::size_t total) {
  if (total == 0) throw std::invalid_argument("percent of an empty total");
  if (matched > total) throw std::invalid_argument("matched exceeds total");
  return static_cast<int>((200 * matched + total) / (2 * total));
}

MatchReport make_report(std::string aspect, std::size_t matched, std::size_t total) {
  return {std::move(aspect), matched, total, percent(matched, total)};
}

GraphTruth graph_truth(const kg::PropertyGraph &graph) {
  GraphTruth t;
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    std::string name = normalize_label(graph.display_name(i));
    t.concepts.insert(name);
    for (const auto &[key, value] : graph.nodes()[i].props)
      if (key != "name") t.attributes.emplace(name, normalize_label(key));
  }
  for (const auto &r : graph.relationships())
    t.relationships.emplace(normalize_label(graph.display_name(r.from)), normalize_label(r.type),
                            normalize_label(graph.display_name(r.to)));
  return t;
}

std::set<std::pair<std::string, std::string>> flow_relationships(const model::ProcessModel &model) {
  auto cfg = model::build_cfg(model);
  auto named = [&](std::size_t i) {
    auto k = cfg.node(i).kind;
    return k == model::NodeKind::kActivity || k == model::NodeKind::kDecision;
  };
  std::set<std::pair<std::string, std::string>> out;
  for (std::size_t u = 0; u < cfg.size(); ++u) {
    if (!named(u)) continue;
    std::vector<bool> seen(cfg.size(), false);
    std::vector<std::size_t> stack;
    for (const auto &o : cfg.successors(u)) stack.push_back(o.to);
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      if (seen[v]) continue;
      seen[v] = true;
      if (named(v)) {
        out.emplace(normalize_label(cfg.node(u).label), normalize_label(cfg.node(v).label));
        continue;
      }
      for (const auto &o : cfg.successors(v)) stack.push_back(o.to);
    }
  }
  return out;
}

ProcessTruth process_truth(const model::ProcessModel &model, const std::vector<rules::Rule> &rules) {
  ProcessTruth t;
  for (const auto &p : model.participants) t.participants.insert(normalize_label(p));
  for (const auto &n : model.nodes)
    if (n.kind == model::NodeKind::kActivity || n.kind == model::NodeKind::kDecision)
      t.activities.insert(normalize_label(n.label));
  t.relationships = flow_relationships(model);
  for (const auto &a : model.artifacts) t.artifacts.insert(normalize_label(a.name));
  for (const auto &r : rules) t.rules.insert(rules::canonical_body(r.body));
  return t;
}

namespace {

template <typename Set>
std::size_t Overlap(const Set &truth, const Set &found) {
  std::size_t n = 0;
  for (const auto &x : truth) n += found.count(x);
  return n;
}

}  // namespace

std::vector<MatchReport> match_graph(const kg::PropertyGraph &extracted, const GraphTruth &truth) {
  GraphTruth found = graph_truth(extracted);
  std::vector<MatchReport> out;
  if (!truth.concepts.empty())
    out.push_back(make_report(kConcepts, Overlap(truth.concepts, found.concepts), truth.concepts.size()));
  if (!truth.relationships.empty())
    out.push_back(make_report(kGraphRelationships, Overlap(truth.relationships, found.relationships),
                              truth.relationships.size()));
  if (!truth.attributes.empty())
    out.push_back(make_report(kAttributes, Overlap(truth.attributes, found.attributes), truth.attributes.size()));
  return out;
}

std::vector<MatchReport> match_process(const model::ProcessModel &extracted, const ProcessTruth &truth,
                                       const std::vector<rules::Rule> &extracted_rules) {
  ProcessTruth found;
  if (!extracted.nodes.empty()) found = process_truth(extracted, extracted_rules);
  else
    for (const auto &r : extracted_rules) found.rules.insert(rules::canonical_body(r.body));
  std::vector<MatchReport> out;
  auto add = [&](const char *aspect, const auto &t, const auto &f) {
    if (!t.empty()) out.push_back(make_report(aspect, Overlap(t, f), t.size()));
  };
  add(kParticipants, truth.participants, found.participants);
  add(kActivities, truth.activities, found.activities);
  add(kProcessRelationships, truth.relationships, found.relationships);
  add(kArtifacts, truth.artifacts, found.artifacts);
  add(kRules, truth.rules, found.rules);
  return out;
}

MatchReport score_queries(const std::vector<std::pair<std::optional<kg::ResultTable>, kg::ResultTable>> &pairs) {
  std::size_t ok = 0;
  for (const auto &[candidate, oracle] : pairs)
    if (candidate && *candidate == oracle) ++ok;
  if (pairs.empty()) return {kQueries, 0, 0, 0};
  return make_report(kQueries, ok, pairs.size());
}

namespace {

const std::vector<std::pair<std::string, std::string>> &RowTitles() {
  static const std::vector<std::pair<std::string, std::string>> kRows = {
      {kConcepts, "Concepts"},
      {kGraphRelationships, "Relationships (KG)"},
      {kAttributes, "Attributes"},
      {kParticipants, "Participants"},
      {kQueries, "Queries"},
      {kActivities, "Activities"},
      {kProcessRelationships, "Relationships (Process)"},
      {kRules, "Rules"},
      {kArtifacts, "Artifacts"},
  };
  return kRows;
}

}  // namespace

std::string summarize(const std::vector<MatchReport> &reports) {
  std::vector<std::array<std::string, 3>> rows;
  std::vector<bool> used(reports.size(), false);
  for (const auto &[key, title] : RowTitles()) {
    for (std::size_t i = 0; i < reports.size(); ++i) {
      if (used[i] || reports[i].aspect != key) continue;
      used[i] = true;
      const auto &r = reports[i];
      rows.push_back({title, std::to_string(r.total),
                      std::to_string(r.matched) + " (" + std::to_string(r.percent) + "%)"});
    }
  }
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (used[i]) continue;
    const auto &r = reports[i];
    rows.push_back({r.aspect, std::to_string(r.total),
                    std::to_string(r.matched) + " (" + std::to_string(r.percent) + "%)"});
  }
  std::array<std::string, 3> header = {"Aspect", "Ground truth", "Extracted"};
  std::array<std::size_t, 3> width{};
  for (std::size_t c = 0; c < 3; ++c) width[c] = header[c].size();
  for (const auto &row : rows)
    for (std::size_t c = 0; c < 3; ++c) width[c] = std::max(width[c], row[c].size());
  auto line = [&](const std::array<std::string, 3> &cells) {
    std::string out;
    for (std::size_t c = 0; c < 3; ++c) {
      if (c) out += " | ";
      out += cells[c];
      if (c < 2) out += std::string(width[c] - cells[c].size(), ' ');
    }
    return out + "\n";
  };
  std::string out = line(header);
  out += std::string(width[0], '-') + "-+-" + std::string(width[1], '-') + "-+-" + std::string(width[2], '-') + "\n";
  for (const auto &row : rows) out += line(row);
  return out;
}

std::string reports_to_json(const std::vector<MatchReport> &reports) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto &r : reports) {
    nlohmann::ordered_json j;
    j["aspect"] = r.aspect;
    j["matched"] = r.matched;
    j["total"] = r.total;
    j["percent"] = r.percent;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

}  // namespace rvsc::eval
