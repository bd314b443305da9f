#pragma once

#include <vector>

#include "rvsc/query.hpp"

namespace rvsc::kg::detail {

bool labels_match(const NodePattern &pattern, const GraphNode &node);
bool props_match(const Properties &wanted, const Properties &have);

// Applies WHERE, projection, aggregation, DISTINCT, ordering and LIMIT to the
// complete matches of `query`.
ResultTable finish(const QueryAst &query, const PropertyGraph &graph, const std::vector<Binding> &matches);

}  // namespace rvsc::kg::detail
