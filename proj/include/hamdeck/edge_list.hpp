#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "hamdeck/graph.hpp"

namespace hamdeck {

// Edge-list text format: a header line "n m", then m lines "u v" with
// 0 <= u < v < n. Duplicates and loops are rejected.

inline Graph read_edge_list(std::istream& in) {
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  };
  auto bad = [&](const std::string& what) {
    fail(ErrorKind::kInvalidInput, "edge list line " + std::to_string(line_no) + ": " + what);
  };

  if (!next_line()) fail(ErrorKind::kInvalidInput, "edge list: missing header line");
  long long n = -1;
  long long m = -1;
  {
    std::istringstream header(line);
    std::string extra;
    if (!(header >> n >> m) || (header >> extra)) bad("expected header 'n m'");
    if (n < 0 || m < 0) bad("negative count in header");
    if (n > 1'000'000) bad("vertex count too large");
  }

  EdgeList edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    if (!next_line()) fail(ErrorKind::kInvalidInput, "edge list: expected " + std::to_string(m) + " edges, found " +
                                                         std::to_string(i));
    std::istringstream row(line);
    long long u = 0;
    long long v = 0;
    std::string extra;
    if (!(row >> u >> v) || (row >> extra)) bad("expected 'u v'");
    if (u == v) bad("loop at vertex " + std::to_string(u));
    if (u < 0 || v < 0 || u >= n || v >= n) bad("endpoint out of range");
    if (u > v) bad("endpoints must satisfy u < v");
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  if (next_line()) bad("trailing content after " + std::to_string(m) + " edges");

  const std::size_t listed = edges.size();
  normalize(edges);
  if (edges.size() != listed) fail(ErrorKind::kInvalidInput, "edge list: duplicate edge");
  return Graph(static_cast<int>(n), std::move(edges));
}

inline Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::kInvalidInput, "cannot open " + path);
  return read_edge_list(in);
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.order() << ' ' << g.size() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

inline std::string to_edge_list(const Graph& g) {
  std::ostringstream out;
  write_edge_list(out, g);
  return out.str();
}

}  // namespace hamdeck
