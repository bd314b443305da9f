#include "rvsc/query.hpp"

namespace rvsc::kg {

std::vector<BatchResult> execute_batch(const std::vector<QueryAst> &queries, const PropertyGraph &graph) {
  std::vector<BatchResult> out(queries.size());
  const long n = static_cast<long>(queries.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      out[i].table = execute(queries[i], graph);
    } catch (const std::exception &e) {
      out[i].error = e.what();
    }
  }
  return out;
}

}  // namespace rvsc::kg
