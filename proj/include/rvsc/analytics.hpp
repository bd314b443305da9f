#pragma once

#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rvsc/graph.hpp"

namespace rvsc::kg {

// Bottlenecks: cut vertices of the undirected projection (direction,
// parallel relationships and self-loops ignored).
std::set<std::string> articulation_points(const PropertyGraph &graph);

// Top-k nodes by in+out degree, ties broken by id ascending (natural order).
std::vector<std::pair<std::string, std::size_t>> degree_centrality(const PropertyGraph &graph, std::size_t k);

// All simple directed paths src -> dst with 1..max_len relationships, as node
// id sequences in lexicographic order. src == dst yields nothing. Throws
// GraphError for unknown endpoints or max_len outside [1, 8].
std::vector<std::vector<std::string>> trace_paths(const PropertyGraph &graph, std::string_view src,
                                                  std::string_view dst, int max_len);

}  // namespace rvsc::kg
