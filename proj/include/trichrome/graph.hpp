#ifndef TRICHROME_GRAPH_HPP
#define TRICHROME_GRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <istream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "trichrome/rational.hpp"
#include "trichrome/sets.hpp"

namespace trichrome {

/// Undirected graph on vertices 1..n with bitmask adjacency rows.
struct Graph {
  int n = 0;
  std::vector<Mask> adj;  // adj[v] = neighbor mask of vertex v+1 (0-based storage)

  Graph() = default;
  explicit Graph(int n_) : n(n_), adj(n_, 0) {
    if (n < 1 || n > 63) throw domain_error("vertex count must be in [1,63]");
  }

  void add_edge(int u, int v) {
    if (u < 1 || u > n || v < 1 || v > n) throw domain_error("edge endpoint out of range");
    if (u == v) throw domain_error("self-loops are not allowed");
    adj[u - 1] |= Mask(1) << (v - 1);
    adj[v - 1] |= Mask(1) << (u - 1);
  }

  bool has_edge(int u, int v) const { return (adj[u - 1] >> (v - 1)) & 1; }
  Mask vertex_mask() const { return (Mask(1) << n) - 1; }

  std::size_t edge_count() const {
    std::size_t twice = 0;
    for (Mask a : adj) twice += popcount(a);
    return twice / 2;
  }

  bool is_independent(Mask s) const {
    for (Mask rest = s; rest; rest &= rest - 1) {
      int v = std::countr_zero(rest);
      if (adj[v] & s) return false;
    }
    return true;
  }

  /// Induced subgraph on the vertices of `s`, vertices renumbered 1..|s| in
  /// ascending original order.
  Graph induced(Mask s) const {
    std::vector<int> verts = mask_elements(s);
    Graph g(std::max<std::size_t>(verts.size(), 1));
    g.n = static_cast<int>(verts.size());
    g.adj.assign(std::max<std::size_t>(verts.size(), 1), 0);
    for (std::size_t i = 0; i < verts.size(); ++i)
      for (std::size_t j = i + 1; j < verts.size(); ++j)
        if (has_edge(verts[i], verts[j])) {
          g.adj[i] |= Mask(1) << j;
          g.adj[j] |= Mask(1) << i;
        }
    return g;
  }
};

// --- DIMACS .col ingestion --------------------------------------------------
// "c ..." comments ignored; "p edge <n> <m>"; "e <u> <v>" with 1-based
// vertices. Duplicate and reversed edges are deduplicated; self-loops rejected.

inline Graph parse_dimacs(std::istream& in) {
  std::string line;
  int line_no = 0;
  std::optional<Graph> g;
  auto err = [&](const std::string& msg) -> parse_error {
    return parse_error("line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "c") continue;
    if (tag == "p") {
      if (g) throw err("duplicate problem line");
      std::string kind;
      int n, m;
      if (!(ss >> kind >> n >> m) || kind != "edge") throw err("expected 'p edge <n> <m>'");
      if (n < 1 || n > 63) throw err("vertex count must be in [1,63]");
      g.emplace(n);
      continue;
    }
    if (tag == "e") {
      if (!g) throw err("edge before problem line");
      int u, v;
      if (!(ss >> u >> v)) throw err("expected 'e <u> <v>'");
      try {
        g->add_edge(u, v);
      } catch (const domain_error& e) {
        throw err(e.what());
      }
      continue;
    }
    throw err("unrecognized line tag '" + tag + "'");
  }
  if (!g) throw parse_error("missing 'p edge' problem line");
  return *g;
}

inline void write_dimacs(std::ostream& out, const Graph& g) {
  out << "p edge " << g.n << " " << g.edge_count() << "\n";
  for (int u = 1; u <= g.n; ++u)
    for (int v = u + 1; v <= g.n; ++v)
      if (g.has_edge(u, v)) out << "e " << u << " " << v << "\n";
}

// --- Independent sets --------------------------------------------------------

/// Streams every inclusion-maximal independent set exactly once, via
/// Bron-Kerbosch with pivoting on the complement graph. Pivot: the
/// lowest-index candidate vertex maximizing non-adjacent coverage of P.
/// An optional size window [min_size, max_size] filters the yields.
template <class Visitor>
void for_each_maximal_independent_set(const Graph& g, Visitor&& visit, int min_size = 0,
                                      int max_size = 63) {
  // In the complement graph, cliques are independent sets of g; comp[v] is
  // the complement neighborhood.
  std::vector<Mask> comp(g.n);
  Mask all = g.vertex_mask();
  for (int v = 0; v < g.n; ++v) comp[v] = all & ~g.adj[v] & ~(Mask(1) << v);

  auto rec = [&](auto&& self, Mask r, Mask p, Mask x) -> void {
    if (p == 0 && x == 0) {
      int sz = popcount(r);
      if (sz >= min_size && sz <= max_size) visit(r);
      return;
    }
    int pivot = -1, best = -1;
    for (Mask rest = p | x; rest; rest &= rest - 1) {
      int u = std::countr_zero(rest);
      int cover = popcount(comp[u] & p);
      if (cover > best) {
        best = cover;
        pivot = u;
      }
    }
    Mask cand = p & ~comp[pivot];
    for (Mask rest = cand; rest; rest &= rest - 1) {
      int v = std::countr_zero(rest);
      Mask vb = Mask(1) << v;
      self(self, r | vb, p & comp[v], x & comp[v]);
      p &= ~vb;
      x |= vb;
    }
  };
  rec(rec, 0, all, 0);
}

inline std::vector<Mask> maximal_independent_sets(const Graph& g, int min_size = 0,
                                                  int max_size = 63) {
  std::vector<Mask> out;
  for_each_maximal_independent_set(g, [&](Mask m) { out.push_back(m); }, min_size, max_size);
  return out;
}

/// Maximum independent set size, branch and bound.
inline int alpha(const Graph& g) {
  int best = 0;
  auto rec = [&](auto&& self, Mask p, int have) -> void {
    if (have + popcount(p) <= best) return;
    if (p == 0) {
      best = std::max(best, have);
      return;
    }
    int v = std::countr_zero(p);
    Mask vb = Mask(1) << v;
    self(self, p & ~vb & ~g.adj[v], have + 1);
    self(self, p & ~vb, have);
  };
  rec(rec, g.vertex_mask(), 0);
  return best;
}

/// Valid 2-coloring as a (side-0 mask, side-1 mask) pair, or nothing.
inline std::optional<std::pair<Mask, Mask>> is_bipartite(const Graph& g) {
  std::vector<int> color(g.n, -1);
  std::vector<int> stack;
  for (int s = 0; s < g.n; ++s) {
    if (color[s] != -1) continue;
    color[s] = 0;
    stack.push_back(s);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (Mask rest = g.adj[v]; rest; rest &= rest - 1) {
        int u = std::countr_zero(rest);
        if (color[u] == -1) {
          color[u] = 1 - color[v];
          stack.push_back(u);
        } else if (color[u] == color[v]) {
          return std::nullopt;
        }
      }
    }
  }
  Mask side0 = 0, side1 = 0;
  for (int v = 0; v < g.n; ++v) (color[v] == 0 ? side0 : side1) |= Mask(1) << v;
  return std::make_pair(side0, side1);
}

/// True iff some maximal independent set leaves a bipartite remainder.
inline bool three_colorable(const Graph& g) {
  if (g.n == 0) return true;
  bool found = false;
  for_each_maximal_independent_set(g, [&](Mask x) {
    if (found) return;
    Mask rest = g.vertex_mask() & ~x;
    if (rest == 0) {
      found = true;
      return;
    }
    if (is_bipartite(g.induced(rest))) found = true;
  });
  return found;
}

/// True iff some maximal independent set leaves a 3-colorable remainder.
inline bool four_colorable(const Graph& g) {
  if (g.n == 0) return true;
  bool found = false;
  for_each_maximal_independent_set(g, [&](Mask x) {
    if (found) return;
    Mask rest = g.vertex_mask() & ~x;
    if (rest == 0 || three_colorable(g.induced(rest))) found = true;
  });
  return found;
}

namespace detail {

/// Backtracking k-colorability with vertices in descending degree order and
/// new colors introduced one at a time (symmetry breaking).
inline bool k_colorable_brute(const Graph& g, int k) {
  if (k >= g.n) return true;
  if (k < 1) return g.n == 0;
  std::vector<int> order(g.n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return popcount(g.adj[a]) > popcount(g.adj[b]); });
  std::vector<Mask> color_class(k, 0);
  auto rec = [&](auto&& self, int pos, int used) -> bool {
    if (pos == g.n) return true;
    int v = order[pos];
    int limit = std::min(used + 1, k);
    for (int c = 0; c < limit; ++c) {
      if (color_class[c] & g.adj[v]) continue;
      color_class[c] |= Mask(1) << v;
      if (self(self, pos + 1, std::max(used, c + 1))) return true;
      color_class[c] &= ~(Mask(1) << v);
    }
    return false;
  };
  return rec(rec, 0, 0);
}

}  // namespace detail

/// Reference chromatic-number oracle: smallest k admitting a proper coloring.
inline int chromatic_brute(const Graph& g) {
  if (g.edge_count() == 0) return 1;
  for (int k = 2; k <= g.n; ++k)
    if (detail::k_colorable_brute(g, k)) return k;
  return g.n;
}

/// All independent sets of size <= max_size, ascending bitmask order.
inline SetFamily independent_set_family(const Graph& g, int max_size) {
  if (g.n > 26) throw resource_error("independent set family enumeration limited to n <= 26");
  SetFamily out;
  out.universe = Universe(g.n);
  Mask all = g.vertex_mask();
  for (Mask m = 0;; ++m) {
    if (popcount(m) <= max_size && g.is_independent(m)) out.members.push_back(m);
    if (m == all) break;
  }
  return out;
}

}  // namespace trichrome

#endif  // TRICHROME_GRAPH_HPP
