#ifndef TRICHROME_SETS_HPP
#define TRICHROME_SETS_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "trichrome/rational.hpp"

namespace trichrome {

using Mask = std::uint64_t;

inline int popcount(Mask m) { return std::popcount(m); }

/// Ground set [n] = {1,...,n}; element i is bit i-1 of a Mask.
struct Universe {
  int n = 0;

  Universe() = default;
  explicit Universe(int n_) : n(n_) {
    if (n < 1 || n > 63) throw domain_error("universe size must be in [1,63], got " + std::to_string(n));
  }

  Mask full_mask() const { return (Mask(1) << n) - 1; }
  bool contains(Mask m) const { return (m & ~full_mask()) == 0; }
};

inline Mask single(int element) { return Mask(1) << (element - 1); }

/// Elements of a mask in ascending order (1-based).
inline std::vector<int> mask_elements(Mask m) {
  std::vector<int> out;
  while (m) {
    out.push_back(std::countr_zero(m) + 1);
    m &= m - 1;
  }
  return out;
}

/// Ordered list of subsets of a universe. Duplicates allowed, order preserved.
struct SetFamily {
  Universe universe;
  std::vector<Mask> members;

  SetFamily() = default;
  SetFamily(Universe u, std::vector<Mask> m) : universe(u), members(std::move(m)) {
    for (Mask x : members)
      if (!universe.contains(x)) throw domain_error("set family member outside universe");
  }

  std::size_t size() const { return members.size(); }
};

/// Ordered partition of [n] into a fault block B0 and blocks B1..Bs.
struct BlockPartition {
  Universe universe;
  Mask fault_block = 0;
  std::vector<Mask> blocks;

  BlockPartition() = default;
  BlockPartition(Universe u, Mask fault, std::vector<Mask> bs)
      : universe(u), fault_block(fault), blocks(std::move(bs)) {
    if (blocks.empty()) throw domain_error("block partition needs at least one block");
    Mask seen = fault_block;
    for (Mask b : blocks) {
      if (b & seen) throw domain_error("block partition blocks overlap");
      seen |= b;
    }
    if (seen != universe.full_mask()) throw domain_error("block partition does not cover the universe");
  }
};

struct BalanceParams {
  Rational delta;
  int r = 1;  // ideal block count
  Rational nu;
};

/// True iff every member A of F has |A| <= nu*n, compared exactly.
inline bool is_nu_bounded(const SetFamily& f, const Rational& nu) {
  if (nu <= 0 && nu != 0) throw domain_error("nu must satisfy 0 < nu <= 1 (nu = 0 tolerated for empty sets)");
  if (nu > 1) throw domain_error("nu must satisfy nu <= 1");
  Rational bound = nu * f.universe.n;
  for (Mask a : f.members)
    if (Rational(popcount(a)) > bound) return false;
  return true;
}

/// True iff |A ∩ B| lies in (1±delta)·|A|/r, compared exactly.
/// |A| = 0 is balanced onto every block (the interval degenerates to {0}).
inline bool is_balanced_onto(Mask a, Mask b, const Rational& delta, int r) {
  if (r < 1) throw domain_error("block count r must be >= 1");
  Rational cut = Rational(popcount(a & b)) * r;
  Rational lo = (1 - delta) * popcount(a);
  Rational hi = (1 + delta) * popcount(a);
  return lo <= cut && cut <= hi;
}

/// Enumerates every ordered triple (X1,X2,X3) of pairwise-disjoint masks with
/// X1|X2|X3 == mask, exactly once: base-3 odometer over the elements of mask
/// in ascending order, lowest element least significant. 3^{|mask|} triples.
template <class Visitor>
void for_each_three_partition(Mask mask, Visitor&& visit) {
  std::vector<int> elems = mask_elements(mask);
  const std::size_t m = elems.size();
  std::vector<int> digit(m, 0);
  for (;;) {
    Mask x[3] = {0, 0, 0};
    for (std::size_t i = 0; i < m; ++i) x[digit[i]] |= single(elems[i]);
    visit(x[0], x[1], x[2]);
    std::size_t pos = 0;
    while (pos < m && digit[pos] == 2) digit[pos++] = 0;
    if (pos == m) break;
    ++digit[pos];
  }
}

struct MaskTriple {
  Mask x1, x2, x3;
};

inline std::vector<MaskTriple> three_partitions_of(Mask mask) {
  std::vector<MaskTriple> out;
  for_each_three_partition(mask, [&](Mask a, Mask b, Mask c) { out.push_back({a, b, c}); });
  return out;
}

// ---------------------------------------------------------------------------
// Set-family text format:
//   line 1: "n <n>"
//   each further nonempty line: a set as strictly increasing integers in 1..n,
//   or "-" for the empty set.
// ---------------------------------------------------------------------------

inline SetFamily parse_set_family(std::istream& in) {
  std::string line;
  int line_no = 0;
  int n = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag != "n") throw parse_error("line " + std::to_string(line_no) + ": expected header 'n <n>'");
    if (!(ss >> n) || n < 1 || n > 63)
      throw parse_error("line " + std::to_string(line_no) + ": universe size must be in [1,63]");
    std::string rest;
    if (ss >> rest) throw parse_error("line " + std::to_string(line_no) + ": trailing tokens after header");
    break;
  }
  if (n < 0) throw parse_error("missing 'n <n>' header line");

  SetFamily f;
  f.universe = Universe(n);
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;
    if (tok == "-") {
      std::string rest;
      if (ss >> rest) throw parse_error("line " + std::to_string(line_no) + ": tokens after '-'");
      f.members.push_back(0);
      continue;
    }
    Mask m = 0;
    int prev = 0;
    std::istringstream ss2(line);
    int v;
    while (ss2 >> v) {
      if (v < 1 || v > n)
        throw parse_error("line " + std::to_string(line_no) + ": element " + std::to_string(v) +
                          " outside 1.." + std::to_string(n));
      if (v <= prev)
        throw parse_error("line " + std::to_string(line_no) + ": elements must be strictly increasing");
      m |= single(v);
      prev = v;
    }
    if (!ss2.eof()) throw parse_error("line " + std::to_string(line_no) + ": malformed element");
    f.members.push_back(m);
  }
  return f;
}

inline void write_set_family(std::ostream& out, const SetFamily& f) {
  out << "n " << f.universe.n << "\n";
  for (Mask m : f.members) {
    if (m == 0) {
      out << "-\n";
      continue;
    }
    bool first = true;
    for (int e : mask_elements(m)) {
      if (!first) out << ' ';
      out << e;
      first = false;
    }
    out << "\n";
  }
}

}  // namespace trichrome

#endif  // TRICHROME_SETS_HPP
