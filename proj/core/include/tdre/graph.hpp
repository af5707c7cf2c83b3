#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tdre/error.hpp"

namespace tdre {

/** Simple directed graph: ordered edge list, no self-loops, no duplicates. */
struct Digraph {
  int n = 0;
  // sorted lexicographically; invariants enforced by make()
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;

  static Digraph make(int n, std::vector<std::pair<std::int32_t, std::int32_t>> edges);

  std::size_t edge_count() const { return edges.size(); }
  std::vector<int> out_degrees() const;
  std::vector<int> in_degrees() const;
  bool operator==(const Digraph& other) const = default;
};

/**
 * Strict "src,dst" CSV parse, 0-based; optional "src,dst" header line.
 * n = 1 + max index unless nodes > 0 is given.
 */
Digraph parse_edge_list(const std::string& path, int nodes = 0);
Digraph parse_edge_list_text(const std::string& text, int nodes = 0);

void write_edge_list(const Digraph& g, const std::string& path);

}  // namespace tdre
