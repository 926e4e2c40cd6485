#ifndef TRICHROME_GEN_HPP
#define TRICHROME_GEN_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "trichrome/graph.hpp"
#include "trichrome/rational.hpp"
#include "trichrome/sets.hpp"

namespace trichrome {

/// Deterministic seedable generator (splitmix64).
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % bound;
  }
};

/// G(n, p) with p = permille/1000.
inline Graph random_graph(int n, int permille, SplitMix64& rng) {
  Graph g(n);
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v)
      if (rng.below(1000) < static_cast<std::uint64_t>(permille)) g.add_edge(u, v);
  return g;
}

/// Complete multipartite graph with the given part sizes; its chromatic
/// number is the number of parts and the parts are the unique optimal
/// color classes, so it plants an exact size profile.
inline Graph complete_multipartite(const std::vector<int>& sizes) {
  int n = std::accumulate(sizes.begin(), sizes.end(), 0);
  Graph g(n);
  std::vector<int> part;
  for (std::size_t i = 0; i < sizes.size(); ++i)
    for (int j = 0; j < sizes[i]; ++j) part.push_back(static_cast<int>(i));
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v)
      if (part[u - 1] != part[v - 1]) g.add_edge(u, v);
  return g;
}

/// Random mask with exactly k of n bits set.
inline Mask random_mask(int n, int k, SplitMix64& rng) {
  Mask m = 0;
  while (popcount(m) < k) m |= Mask(1) << rng.below(n);
  return m;
}

/// `count` random members, each of size at most floor(nu*n), duplicates kept.
inline SetFamily random_nu_bounded_family(int n, const Rational& nu, int count, SplitMix64& rng) {
  int s = static_cast<int>(to_int64(floor_rational(nu * n)));
  SetFamily f;
  f.universe = Universe(n);
  for (int i = 0; i < count; ++i)
    f.members.push_back(random_mask(n, static_cast<int>(rng.below(s + 1)), rng));
  return f;
}

struct PlantedTripartition {
  SetFamily f1, f2, f3;
  Mask a1 = 0, a2 = 0, a3 = 0;  // the planted witness
};

/// Random tripartition of [n] with every part of size at most floor(nu*n),
/// planted into three noise families.
inline PlantedTripartition planted_tripartition(int n, const Rational& nu, int noise,
                                                SplitMix64& rng) {
  if (!(3 * nu >= 1)) throw domain_error("nu below 1/3 leaves the universe uncoverable");
  int cap = static_cast<int>(to_int64(floor_rational(nu * n)));
  if (3 * cap < n)
    throw domain_error("no tripartition with integer part sizes at most floor(nu*n)");
  PlantedTripartition out;
  for (;;) {
    Mask a1 = 0, a2 = 0, a3 = 0;
    for (int v = 0; v < n; ++v) {
      Mask b = Mask(1) << v;
      switch (rng.below(3)) {
        case 0: a1 |= b; break;
        case 1: a2 |= b; break;
        default: a3 |= b; break;
      }
    }
    if (popcount(a1) > cap || popcount(a2) > cap || popcount(a3) > cap) continue;
    out.a1 = a1;
    out.a2 = a2;
    out.a3 = a3;
    break;
  }
  out.f1 = random_nu_bounded_family(n, nu, noise, rng);
  out.f2 = random_nu_bounded_family(n, nu, noise, rng);
  out.f3 = random_nu_bounded_family(n, nu, noise, rng);
  out.f1.members.push_back(out.a1);
  out.f2.members.push_back(out.a2);
  out.f3.members.push_back(out.a3);
  for (auto* f : {&out.f1, &out.f2, &out.f3}) {
    std::sort(f->members.begin(), f->members.end());
    f->members.erase(std::unique(f->members.begin(), f->members.end()), f->members.end());
  }
  return out;
}

// --- Graph catalog -----------------------------------------------------------

/// Smallest edge bitset over all vertex relabelings; equal keys mean
/// isomorphic graphs. Orderings are restricted to equitable-refinement color
/// classes (an isomorphism invariant), and the minimum is found by placing
/// vertices one by one with most-significant-bits-first encoding so a partial
/// key already lower-bounds all of its extensions.
inline std::uint64_t canonical_graph_key(const Graph& g) {
  const int n = g.n;
  std::vector<int> color(n);
  for (int v = 0; v < n; ++v) color[v] = popcount(g.adj[v]);
  for (;;) {
    std::vector<std::vector<int>> sig(n);
    for (int v = 0; v < n; ++v) {
      sig[v].push_back(color[v]);
      for (int u = 0; u < n; ++u)
        if ((g.adj[v] >> u) & 1) sig[v].push_back(color[u]);
      std::sort(sig[v].begin() + 1, sig[v].end());
    }
    std::vector<std::vector<int>> classes(sig.begin(), sig.end());
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    std::vector<int> next(n);
    for (int v = 0; v < n; ++v)
      next[v] = static_cast<int>(
          std::lower_bound(classes.begin(), classes.end(), sig[v]) - classes.begin());
    if (next == color) break;
    color = next;
  }
  const int total_bits = n * (n - 1) / 2;
  std::uint64_t best = UINT64_MAX;
  std::vector<int> placed(n, 0);
  std::vector<char> used(n, 0);
  auto rec = [&](auto&& self, int p, std::uint64_t key) -> void {
    if (p == n) {
      best = std::min(best, key);
      return;
    }
    int cmin = INT_MAX;
    for (int v = 0; v < n; ++v)
      if (!used[v]) cmin = std::min(cmin, color[v]);
    const int base = total_bits - 1 - p * (p - 1) / 2;
    for (int v = 0; v < n; ++v) {
      if (used[v] || color[v] != cmin) continue;
      std::uint64_t k2 = key;
      for (int q = 0; q < p; ++q)
        if ((g.adj[v] >> placed[q]) & 1) k2 |= std::uint64_t(1) << (base - q);
      if (k2 > best) continue;  // unset bits only grow the value
      used[v] = 1;
      placed[p] = v;
      self(self, p + 1, k2);
      used[v] = 0;
    }
  };
  rec(rec, 0, 0);
  return best;
}

inline Graph graph_from_key(int n, std::uint64_t key) {
  Graph g(n);
  int total_bits = n * (n - 1) / 2, t = 0;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i, ++t)
      if ((key >> (total_bits - 1 - t)) & 1) g.add_edge(i + 1, j + 1);
  return g;
}

/// All graphs on n <= 9 labeled vertices up to isomorphism, built by vertex
/// augmentation from the (n-1)-catalog. Counts: 1, 2, 4, 11, 34, 156, 1044,
/// 12346, 274668.
inline std::vector<Graph> graph_catalog(int n) {
  if (n < 1 || n > 9) throw resource_error("exhaustive catalog limited to n <= 9");
  std::vector<std::uint64_t> keys{0};  // the one-vertex graph
  for (int m = 2; m <= n; ++m) {
    std::set<std::uint64_t> next;
    for (std::uint64_t key : keys) {
      Graph base = graph_from_key(m - 1, key);
      for (Mask nbrs = 0; nbrs < (Mask(1) << (m - 1)); ++nbrs) {
        Graph g(m);
        for (int i = 0; i < m - 1; ++i) g.adj[i] = base.adj[i];
        for (int v = 0; v < m - 1; ++v)
          if ((nbrs >> v) & 1) g.add_edge(v + 1, m);
        next.insert(canonical_graph_key(g));
      }
    }
    keys.assign(next.begin(), next.end());
  }
  std::vector<Graph> out;
  out.reserve(keys.size());
  for (std::uint64_t key : keys) out.push_back(graph_from_key(n, key));
  return out;
}

}  // namespace trichrome

#endif  // TRICHROME_GEN_HPP
