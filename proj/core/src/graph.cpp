#include "tdre/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace tdre {

Digraph Digraph::make(int n, std::vector<std::pair<std::int32_t, std::int32_t>> edges) {
  std::sort(edges.begin(), edges.end());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    auto [s, d] = edges[k];
    if (s < 0 || d < 0 || s >= n || d >= n)
      throw Error(ErrorKind::ParseError,
                  "edge (" + std::to_string(s) + "," + std::to_string(d) +
                      ") outside [0," + std::to_string(n) + ")");
    if (s == d)
      throw Error(ErrorKind::SelfLoop, "self-loop at node " + std::to_string(s), s);
    if (k > 0 && edges[k] == edges[k - 1])
      throw Error(ErrorKind::DuplicateEdge,
                  "duplicate edge (" + std::to_string(s) + "," + std::to_string(d) + ")");
  }
  Digraph g;
  g.n = n;
  g.edges = std::move(edges);
  return g;
}

std::vector<int> Digraph::out_degrees() const {
  std::vector<int> d(n, 0);
  for (auto [s, t] : edges) d[s]++;
  return d;
}

std::vector<int> Digraph::in_degrees() const {
  std::vector<int> d(n, 0);
  for (auto [s, t] : edges) d[t]++;
  return d;
}

namespace {

bool parse_index(std::string_view field, std::int32_t& out) {
  // trim spaces and an optional CR
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
    field.remove_prefix(1);
  while (!field.empty() &&
         (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
    field.remove_suffix(1);
  if (field.empty()) return false;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

}  // namespace

Digraph parse_edge_list_text(const std::string& text, int nodes) {
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  std::vector<long> lines;
  std::int32_t max_idx = -1;
  std::istringstream in(text);
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv(line);
    if (!sv.empty() && sv.back() == '\r') sv.remove_suffix(1);
    if (sv.empty()) continue;
    if (line_no == 1 && sv.find("src") != std::string_view::npos &&
        sv.find_first_of("0123456789") == std::string_view::npos)
      continue;  // optional header
    const auto comma = sv.find(',');
    std::int32_t s, d;
    if (comma == std::string_view::npos || !parse_index(sv.substr(0, comma), s) ||
        !parse_index(sv.substr(comma + 1), d))
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) +
                      ": expected \"src,dst\", got \"" + line + "\"", line_no);
    if (s == d)
      throw Error(ErrorKind::SelfLoop,
                  "line " + std::to_string(line_no) + ": self-loop at node " +
                      std::to_string(s), line_no);
    if (s < 0 || d < 0)
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(line_no) + ": negative node index", line_no);
    edges.emplace_back(s, d);
    lines.push_back(line_no);
    max_idx = std::max({max_idx, s, d});
  }
  const int n = nodes > 0 ? nodes : int(max_idx) + 1;
  if (nodes > 0 && max_idx >= nodes)
    throw Error(ErrorKind::ParseError,
                "node index " + std::to_string(max_idx) + " >= --nodes " +
                    std::to_string(nodes));
  std::vector<std::size_t> order(edges.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return edges[a] < edges[b] || (edges[a] == edges[b] && a < b);
  });
  for (std::size_t k = 1; k < order.size(); ++k)
    if (edges[order[k]] == edges[order[k - 1]])
      throw Error(ErrorKind::DuplicateEdge,
                  "line " + std::to_string(lines[order[k]]) + ": duplicate edge (" +
                      std::to_string(edges[order[k]].first) + "," +
                      std::to_string(edges[order[k]].second) + ")",
                  lines[order[k]]);
  return Digraph::make(n, std::move(edges));
}

Digraph parse_edge_list(const std::string& path, int nodes) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_edge_list_text(ss.str(), nodes);
}

void write_edge_list(const Digraph& g, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::IoError, "cannot write " + path);
  f << "src,dst\n";
  for (auto [s, d] : g.edges) f << s << ',' << d << '\n';
  if (!f) throw Error(ErrorKind::IoError, "write failed for " + path);
}

}  // namespace tdre
