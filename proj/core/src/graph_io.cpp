#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "currsim/graph.hpp"

namespace currsim {

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "n " << g.size() << '\n';
  if (g.has_communities()) {
    out << "communities";
    for (auto c : g.communities()) out << ' ' << static_cast<int>(c);
    out << '\n';
  }
  for (auto [i, j] : g.edges()) out << i << ' ' << j << '\n';
}

Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) -> FormatError {
    return FormatError("edge list line " + std::to_string(lineno) + ": " + what);
  };
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };

  if (!next_line()) throw FormatError("edge list is empty");
  std::istringstream header(line);
  std::string tag;
  long long n = 0;
  if (!(header >> tag >> n) || tag != "n" || n <= 0) throw fail("expected 'n <N>' with N > 0");

  std::vector<std::uint8_t> communities;
  std::vector<Edge> edges;
  bool first_body_line = true;
  while (next_line()) {
    std::istringstream row(line);
    if (first_body_line && line.rfind("communities", 0) == 0) {
      row >> tag;
      int c = 0;
      while (row >> c) {
        if (c != 0 && c != 1) throw fail("community labels must be 0 or 1");
        communities.push_back(static_cast<std::uint8_t>(c));
      }
      if (!row.eof()) throw fail("malformed communities line");
      if (communities.size() != static_cast<std::size_t>(n)) throw fail("need one community label per agent");
      first_body_line = false;
      continue;
    }
    first_body_line = false;
    long long i = -1;
    long long j = -1;
    std::string extra;
    if (!(row >> i >> j) || (row >> extra)) throw fail("expected 'i j'");
    if (i < 0 || j < 0 || i >= n || j >= n) throw fail("endpoint out of range");
    if (i >= j) throw fail("edges must be written with i < j");
    edges.emplace_back(static_cast<AgentId>(i), static_cast<AgentId>(j));
  }
  try {
    return Graph::from_edges(static_cast<std::size_t>(n), edges, std::move(communities));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("edge list: ") + e.what());
  }
}

}  // namespace currsim
