#pragma once

#include <cstdint>

#include "tdre/graph.hpp"
#include "tdre/model.hpp"

namespace tdre {

/**
 * Draw one graph: each unordered pair {i,j} (i<j) picks a configuration from
 * the categorical law (p00, p01, p10, p11) using the dyad's own counter, so
 * the result depends only on (theta_vec, seed).
 */
Digraph sample_graph(const ParamVector& p, std::uint64_t seed);

/**
 * Sparse-regime sampler: candidate non-null dyads located by geometric skips
 * at an upper-bound rate, then thinned and assigned a configuration by
 * per-dyad draws. Exact same categorical law per dyad as sample_graph, but a
 * different (documented) draw schedule, so graphs differ across the two
 * methods for equal seeds. O(n * density) expected work.
 */
Digraph sample_graph_sparse(const ParamVector& p, std::uint64_t seed);

}  // namespace tdre
