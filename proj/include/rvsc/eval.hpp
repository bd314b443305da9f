#pragma once

#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "rvsc/graph.hpp"
#include "rvsc/process_model.hpp"
#include "rvsc/query.hpp"
#include "rvsc/rules.hpp"

namespace rvsc::eval {

struct MatchReport {
  std::string aspect;
  std::size_t matched = 0;
  std::size_t total = 0;
  int percent = 0;
  bool operator==(const MatchReport &) const = default;
};

// round-half-up(100 * matched / total). Throws std::invalid_argument when
// total is 0 or matched > total.
int percent(std::size_t matched, std::size_t total);

MatchReport make_report(std::string aspect, std::size_t matched, std::size_t total);

// Aspect keys, in table order.
inline constexpr const char *kConcepts = "concepts";
inline constexpr const char *kGraphRelationships = "kg relationships";
inline constexpr const char *kAttributes = "attributes";
inline constexpr const char *kParticipants = "participants";
inline constexpr const char *kQueries = "queries";
inline constexpr const char *kActivities = "activities";
inline constexpr const char *kProcessRelationships = "process relationships";
inline constexpr const char *kRules = "rules";
inline constexpr const char *kArtifacts = "artifacts";

// All members hold normalized labels.
struct GraphTruth {
  std::set<std::string> concepts;
  std::set<std::tuple<std::string, std::string, std::string>> relationships;  // (source, type, target)
  std::set<std::pair<std::string, std::string>> attributes;                    // (concept, key)
};

// Concept = node named by its "name" property (id otherwise); attribute =
// property other than name.
GraphTruth graph_truth(const kg::PropertyGraph &graph);

struct ProcessTruth {
  std::set<std::string> participants;
  std::set<std::string> activities;
  std::set<std::pair<std::string, std::string>> relationships;
  std::set<std::string> artifacts;
  std::set<std::string> rules;  // canonical_body strings
};

// Relationships are direct flows between activity/decision nodes, looking
// through start, fork, join and merge nodes.
std::set<std::pair<std::string, std::string>> flow_relationships(const model::ProcessModel &model);

ProcessTruth process_truth(const model::ProcessModel &model, const std::vector<rules::Rule> &rules);

// Recall against the truth: concepts, kg relationships, attributes.
std::vector<MatchReport> match_graph(const kg::PropertyGraph &extracted, const GraphTruth &truth);

// participants, activities, process relationships, artifacts, rules. Aspects
// with an empty truth set are omitted.
std::vector<MatchReport> match_process(const model::ProcessModel &extracted, const ProcessTruth &truth,
                                       const std::vector<rules::Rule> &extracted_rules = {});

// Each pair is (candidate result, oracle result); a missing candidate means the
// candidate query did not parse or failed to run.
MatchReport score_queries(const std::vector<std::pair<std::optional<kg::ResultTable>, kg::ResultTable>> &pairs);

// Fixed row order; cells read "N (P%)". Unknown aspects follow in input order.
std::string summarize(const std::vector<MatchReport> &reports);
std::string reports_to_json(const std::vector<MatchReport> &reports);

}  // namespace rvsc::eval
