#ifndef TRICHROME_TRIPARTITION_HPP
#define TRICHROME_TRIPARTITION_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "trichrome/rational.hpp"
#include "trichrome/sets.hpp"
#include "trichrome/tensor.hpp"

namespace trichrome {

// ---------------------------------------------------------------------------
// Pairwise-independent hashing
// ---------------------------------------------------------------------------

inline bool is_prime(int v) {
  if (v < 2) return false;
  for (int d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

inline int smallest_prime_at_least(int n) {
  for (int p = std::max(n, 2); p <= 2 * std::max(n, 2); ++p)
    if (is_prime(p)) return p;
  throw domain_error("no prime found in [n, 2n]");  // unreachable for n >= 1
}

/// Affine hash family h_{a,b}(x) = ((a*x + b) mod p) mod r over x in [n],
/// all (a,b) in [p] x [p] enumerated lexicographically.
struct HashFamily {
  int n = 0;
  int p = 0;
  int r = 0;

  int eval(int a, int b, int x) const { return ((a * x + b) % p) % r; }

  Mask preimage(int a, int b, int j) const {
    Mask out = 0;
    for (int x = 1; x <= n; ++x)
      if (eval(a, b, x) == j) out |= single(x);
    return out;
  }

  std::size_t size() const { return std::size_t(p) * p; }
};

inline HashFamily pairwise_hash_family(int n, int r) {
  if (n < 1) throw domain_error("hash domain must be nonempty");
  if (r < 1 || r > n) throw domain_error("hash range r must satisfy 1 <= r <= n");
  HashFamily h;
  h.n = n;
  h.p = smallest_prime_at_least(n);
  h.r = r;
  return h;
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

/// First witness in canonical order (F1 index, then F2 index; F3's set is
/// forced to the complement), or nothing.
inline std::optional<MaskTriple> brute_tripartition(const SetFamily& f1, const SetFamily& f2,
                                                    const SetFamily& f3) {
  if (f1.universe.n != f2.universe.n || f2.universe.n != f3.universe.n)
    throw domain_error("tripartition families must share a universe");
  Mask full = f1.universe.full_mask();
  std::unordered_map<Mask, std::size_t> first_in_f3;
  for (std::size_t i = 0; i < f3.members.size(); ++i) first_in_f3.emplace(f3.members[i], i);
  for (Mask a : f1.members)
    for (Mask b : f2.members) {
      if (a & b) continue;
      Mask c = full & ~(a | b);
      if (first_in_f3.contains(c)) return MaskTriple{a, b, c};
    }
  return std::nullopt;
}

/// Subfamily of F balanced onto every listed block, order preserved.
inline SetFamily filter_block_balanced(const SetFamily& f, const std::vector<Mask>& blocks,
                                       const Rational& delta, int r) {
  SetFamily out;
  out.universe = f.universe;
  for (Mask a : f.members) {
    bool ok = true;
    for (Mask b : blocks)
      if (!is_balanced_onto(a, b, delta, r)) {
        ok = false;
        break;
      }
    if (ok) out.members.push_back(a);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Block-balanced solver
// ---------------------------------------------------------------------------

struct DecompositionSet {
  Decomposition main;
  std::optional<Decomposition> base;  // s=1 certificate for remainder factors
  bool counting_safe = false;         // all entries 0/1: machine-word counting is exact
};

using DecompositionProvider = std::function<DecompositionSet(const SparseTensor&)>;

inline DecompositionProvider trivial_provider(std::uint64_t cap = kDefaultNnzCap) {
  return [cap](const SparseTensor& t) {
    DecompositionSet d;
    d.main = trivial_decomposition(t, 1, cap);
    d.counting_safe = true;
    return d;
  };
}

/// Shared caches for repeated block-balanced solves: block tensors, their
/// certificates, and leg index maps, keyed by (cutoff, max block size).
struct BlockSolveContext {
  DecompositionProvider provider = trivial_provider();
  std::uint64_t nnz_cap = kDefaultNnzCap;

  struct CacheEntry {
    SparseTensor tensor;
    DecompositionSet decomp;
    std::unordered_map<std::uint64_t, std::uint64_t> leg_index;  // (k << 26) | subset
  };
  std::map<std::pair<int, int>, CacheEntry> cache;

  const CacheEntry& get(int cutoff, int max_block) {
    auto key = std::make_pair(cutoff, max_block);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    CacheEntry e;
    e.tensor = block_sum_tensor_cutoff(cutoff, max_block);
    if (e.tensor.nnz() > nnz_cap) throw resource_error("block tensor exceeds nnz cap");
    e.decomp = provider(e.tensor);
    std::uint64_t idx = 0;
    for (int k = 1; k <= max_block; ++k)
      for (Mask s : bounded_subsets(k, std::min(cutoff, k)))
        e.leg_index.emplace((std::uint64_t(k) << 26) | s, idx++);
    return cache.emplace(key, std::move(e)).first->second;
  }
};

namespace detail {

inline Mask compress_into(Mask a, const std::vector<int>& block_elems) {
  Mask out = 0;
  for (std::size_t i = 0; i < block_elems.size(); ++i)
    if (a & single(block_elems[i])) out |= Mask(1) << i;
  return out;
}

template <class Scalar>
bool run_block_tensor(const std::vector<Mask>& f1, const std::vector<Mask>& f2,
                      const std::vector<Mask>& f3, const std::vector<std::vector<int>>& block_elems,
                      const BlockSolveContext::CacheEntry& e, bool early_exit) {
  const std::uint64_t L = e.tensor.dims[0];
  const int s = static_cast<int>(block_elems.size());
  auto encode = [&](const std::vector<Mask>& fam) {
    SparseVec<Scalar> v;
    v.reserve(fam.size() * 2);
    for (Mask a : fam) {
      std::uint64_t idx = 0;
      for (int u = 0; u < s; ++u) {
        int k = static_cast<int>(block_elems[u].size());
        Mask local = compress_into(a, block_elems[u]);
        idx = idx * L + e.leg_index.at((std::uint64_t(k) << 26) | local);
      }
      v[idx] += Scalar(1);
    }
    return v;
  };
  auto res = yates_evaluate_sparse<Scalar>(e.decomp.main, e.decomp.base ? &*e.decomp.base : nullptr,
                                           s, encode(f1), encode(f2), encode(f3), early_exit);
  return res.value != Scalar(0);
}

}  // namespace detail

/// Core solver: true iff some triple (A1,A2,A3) from the three mask lists
/// tripartitions every block, i.e. for each block B the intersections
/// A1∩B, A2∩B, A3∩B partition B. Blocks must partition the active universe;
/// the coefficient-1 block tensor makes "nonzero" equivalent to "witness".
inline bool solve_block_balanced_masks(const std::vector<Mask>& f1, const std::vector<Mask>& f2,
                                       const std::vector<Mask>& f3, const std::vector<Mask>& blocks,
                                       BlockSolveContext& ctx, int theory_cutoff = 0) {
  if (f1.empty() || f2.empty() || f3.empty()) return false;
  std::vector<std::vector<int>> block_elems;
  int max_block = 0;
  for (Mask b : blocks) {
    if (b == 0) continue;  // empty blocks constrain nothing
    block_elems.push_back(mask_elements(b));
    max_block = std::max<int>(max_block, popcount(b));
  }
  if (block_elems.empty()) {
    // Nothing to cover: only the all-empty triple qualifies.
    auto has_empty = [](const std::vector<Mask>& f) {
      for (Mask a : f)
        if (a == 0) return true;
      return false;
    };
    return has_empty(f1) && has_empty(f2) && has_empty(f3);
  }

  int cutoff = theory_cutoff;
  for (const auto& fam : {&f1, &f2, &f3})
    for (Mask a : *fam)
      for (const auto& be : block_elems)
        cutoff = std::max(cutoff, popcount(detail::compress_into(a, be)));

  const auto& e = ctx.get(cutoff, max_block);
  bool nonneg = e.decomp.counting_safe ||
                (e.decomp.main.all_nonnegative() && (!e.decomp.base || e.decomp.base->all_nonnegative()));
  if (e.decomp.counting_safe)
    return detail::run_block_tensor<std::uint64_t>(f1, f2, f3, block_elems, e, true);
  return detail::run_block_tensor<Rational>(f1, f2, f3, block_elems, e, nonneg);
}

/// Precondition-checked wrapper: nu' = (1+delta)*nu
/// below 1/2, the universe balanced onto every block, inputs filtered for
/// block balance defensively.
inline bool solve_block_balanced(const SetFamily& f1, const SetFamily& f2, const SetFamily& f3,
                                 const BlockPartition& bp, const BalanceParams& params,
                                 BlockSolveContext& ctx) {
  if (bp.fault_block != 0) throw domain_error("block-balanced solver takes a fault-free partition");
  Rational nu_prime = (1 + params.delta) * params.nu;
  if (!(nu_prime < Rational(1, 2)))
    throw domain_error("precondition (1+delta)*nu < 1/2 violated");
  const int n = bp.universe.n;
  for (Mask b : bp.blocks)
    if (!is_balanced_onto(bp.universe.full_mask(), b, params.delta, params.r))
      throw domain_error("universe is not balanced onto every block");
  for (const SetFamily* f : {&f1, &f2, &f3})
    if (!is_nu_bounded(*f, params.nu)) throw domain_error("input family is not nu-bounded");
  Rational b_ideal = Rational(n) / params.r;
  int theory_cutoff = static_cast<int>(to_int64(ceil_rational(nu_prime * b_ideal)));
  auto g1 = filter_block_balanced(f1, bp.blocks, params.delta, params.r);
  auto g2 = filter_block_balanced(f2, bp.blocks, params.delta, params.r);
  auto g3 = filter_block_balanced(f3, bp.blocks, params.delta, params.r);
  return solve_block_balanced_masks(g1.members, g2.members, g3.members, bp.blocks, ctx,
                                    theory_cutoff);
}

// ---------------------------------------------------------------------------
// Balancing families
// ---------------------------------------------------------------------------

struct BalancingFamily {
  BalanceParams params;
  int p = 0;
  int r = 0;
  Rational b;  // achieved block size n/r
  std::vector<BlockPartition> partitions;
  std::size_t dropped = 0;  // construction candidates failing the structural bounds
};

/// Emits the (h, Q) partitions of the affine hash family: fault block
/// union of the preimages of Q, remaining preimages as blocks in range order.
/// Members violating |B0| <= delta*n or |Bi| in (1±delta)*n/r are dropped and
/// counted; exact duplicates keep their first occurrence.
inline BalancingFamily build_balancing_family(int n, const Rational& delta, const Rational& nu,
                                              const Rational& b_prime, bool force_small = false) {
  if (n < 1 || n > 63) throw domain_error("universe size out of range");
  Rational kappa = 1 - 2 * nu;
  if (!(kappa > 0)) throw domain_error("nu must be below 1/2");
  if (!(delta > 0)) throw domain_error("delta must be positive");
  if (!(b_prime > 0)) throw domain_error("b' must be positive");
  if (!force_small) {
    Rational required = 3 / (delta * delta * delta * kappa * kappa);
    if (b_prime < required)
      throw domain_error("b' below the size condition 3*delta^-3*(1-2nu)^-2 = " +
                         rational_to_string(required) + "; pass force_small to proceed");
  }
  Int lo = ceil_rational(Rational(n) / (2 * b_prime));
  Int hi = floor_rational(Rational(n) / b_prime);
  int r = 0;
  for (Int cand = std::max<Int>(lo, 2); cand <= hi; ++cand)
    if (is_prime(static_cast<int>(to_int64(cand)))) {
      r = static_cast<int>(to_int64(cand));
      break;
    }
  if (r == 0)
    throw domain_error("no prime block count in [" + lo.str() + ", " + hi.str() +
                       "] for b' = " + rational_to_string(b_prime));

  HashFamily hf = pairwise_hash_family(n, r);
  BalancingFamily fam;
  fam.params = BalanceParams{delta, r, nu};
  fam.p = hf.p;
  fam.r = r;
  fam.b = Rational(n) / r;

  const Int max_q = floor_rational(delta * r);
  Universe u(n);
  std::set<std::vector<Mask>> seen;
  for (int a = 0; a < hf.p; ++a)
    for (int b = 0; b < hf.p; ++b) {
      std::vector<Mask> pre(r);
      for (int j = 0; j < r; ++j) pre[j] = hf.preimage(a, b, j);
      for (Mask q = 0; q < (Mask(1) << r); ++q) {
        if (Int(popcount(q)) > max_q) continue;
        Mask fault = 0;
        std::vector<Mask> blocks;
        for (int j = 0; j < r; ++j) {
          if ((q >> j) & 1)
            fault |= pre[j];
          else
            blocks.push_back(pre[j]);
        }
        if (blocks.empty()) continue;
        bool ok = Rational(popcount(fault)) <= delta * n;
        for (Mask bl : blocks) {
          if (!ok) break;
          Rational size(popcount(bl));
          ok = (1 - delta) * fam.b <= size && size <= (1 + delta) * fam.b;
        }
        if (!ok) {
          ++fam.dropped;
          continue;
        }
        std::vector<Mask> key;
        key.push_back(fault);
        key.insert(key.end(), blocks.begin(), blocks.end());
        if (!seen.insert(key).second) continue;
        fam.partitions.emplace_back(u, fault, blocks);
      }
    }
  return fam;
}

/// Exhaustive covering check: for every nu-bounded ordered tripartition of
/// [n], some member must have every part balanced onto every non-fault block.
/// Returns a violating tripartition, or nothing when the property holds.
inline std::optional<MaskTriple> verify_balancing_family(const BalancingFamily& fam, int n) {
  Universe u(n);
  Mask full = u.full_mask();
  const Rational& delta = fam.params.delta;
  const int r = fam.params.r;
  Rational size_bound = fam.params.nu * n;

  // Per mask: bitset over members that balance it onto all their blocks.
  const std::size_t m = fam.partitions.size();
  const std::size_t words = (m + 63) / 64;
  std::vector<std::vector<std::uint64_t>> covers(std::size_t(1) << n,
                                                 std::vector<std::uint64_t>(words, 0));
  for (Mask x = 0; x <= full; ++x) {
    if (Rational(popcount(x)) > size_bound) continue;
    for (std::size_t i = 0; i < m; ++i) {
      bool ok = true;
      for (Mask b : fam.partitions[i].blocks)
        if (!is_balanced_onto(x, b, delta, r)) {
          ok = false;
          break;
        }
      if (ok) covers[x][i / 64] |= std::uint64_t(1) << (i % 64);
    }
  }

  std::optional<MaskTriple> violator;
  for_each_three_partition(full, [&](Mask x1, Mask x2, Mask x3) {
    if (violator) return;
    if (Rational(popcount(x1)) > size_bound || Rational(popcount(x2)) > size_bound ||
        Rational(popcount(x3)) > size_bound)
      return;
    const auto &c1 = covers[x1], &c2 = covers[x2], &c3 = covers[x3];
    for (std::size_t w = 0; w < words; ++w)
      if (c1[w] & c2[w] & c3[w]) return;
    violator = MaskTriple{x1, x2, x3};
  });
  return violator;
}

// ---------------------------------------------------------------------------
// Full reduction
// ---------------------------------------------------------------------------

struct TripartitionOptions {
  Rational b_prime;  // 0: default n/6
  bool force_small = true;
  bool exact_fallback = true;  // append a single-block exact solve (small n)
  std::uint64_t nnz_cap = kDefaultNnzCap;
};

struct TripartitionStats {
  std::uint64_t block_solver_calls = 0;
  std::size_t family_size = 0;
  int max_fault_size = 0;
  bool exact = true;  // false when neither short-circuit nor fallback applied
};

/// Caches shared across solves: balancing families per (n, delta, nu, b')
/// and block tensors/certificates per (cutoff, max block size).
struct TripartitionContext {
  BlockSolveContext blocks;
  std::map<std::tuple<int, Rational, Rational, Rational>, BalancingFamily> families;

  const BalancingFamily& family(int n, const Rational& delta, const Rational& nu,
                                const Rational& b_prime, bool force_small) {
    auto key = std::make_tuple(n, delta, nu, b_prime);
    auto it = families.find(key);
    if (it != families.end()) return it->second;
    return families.emplace(key, build_balancing_family(n, delta, nu, b_prime, force_small))
        .first->second;
  }
};

/// Full reduction: iterate balancing-family members and 3-way splits
/// of the fault block, keep sets matching the split, filter for block
/// balance, and delegate to the block-balanced tensor solver. A trailing
/// single-block exact solve (feasible for n <= 14) removes any dependence of
/// completeness on the family's covering property at desk scale; soundness
/// is by construction in every branch.
inline bool solve_tripartition(const SetFamily& f1, const SetFamily& f2, const SetFamily& f3,
                               const Rational& nu, const Rational& delta,
                               TripartitionContext& ctx, const TripartitionOptions& opts = {},
                               TripartitionStats* stats = nullptr) {
  if (f1.universe.n != f2.universe.n || f2.universe.n != f3.universe.n)
    throw domain_error("tripartition families must share a universe");
  if (!(Rational(1, 3) <= nu && nu < Rational(1, 2)))
    throw domain_error("nu must lie in [1/3, 1/2)");
  for (const SetFamily* f : {&f1, &f2, &f3})
    if (!is_nu_bounded(*f, nu)) throw domain_error("input family is not nu-bounded");

  const int n = f1.universe.n;
  ctx.blocks.nnz_cap = opts.nnz_cap;
  TripartitionStats local;
  TripartitionStats& st = stats ? *stats : local;
  st = TripartitionStats{};

  if (f1.members.empty() || f2.members.empty() || f3.members.empty()) {
    st.exact = true;
    return false;
  }

  Rational b_prime = opts.b_prime != 0 ? opts.b_prime : Rational(n, 6);
  // A hash range below 2 or above n leaves no balancing family to build;
  // tiny universes go straight to the exact single-block solve.
  static const std::vector<BlockPartition> kNoPartitions;
  const std::vector<BlockPartition>& partitions =
      n >= 3 ? ctx.family(n, delta, nu, b_prime, opts.force_small).partitions : kNoPartitions;
  const int fam_r = n >= 3 ? ctx.family(n, delta, nu, b_prime, opts.force_small).r : 1;
  st.family_size = partitions.size();

  Rational nu_prime = (1 + delta) * nu;
  for (const BlockPartition& bp : partitions) {
    st.max_fault_size = std::max(st.max_fault_size, popcount(bp.fault_block));
    const Mask b0 = bp.fault_block;
    // Cutoff from the balance accounting, relative to the stripped universe.
    int n_stripped = n - popcount(b0);
    int theory_cutoff = 0;
    if (n_stripped > 0 && fam_r > 0)
      theory_cutoff =
          static_cast<int>(to_int64(ceil_rational(nu_prime * Rational(n_stripped) / fam_r)));

    bool exact_member = false;
    bool verdict = false;
    for_each_three_partition(b0, [&](Mask x1, Mask x2, Mask x3) {
      if (verdict) return;
      const Mask xs[3] = {x1, x2, x3};
      const SetFamily* fams[3] = {&f1, &f2, &f3};
      std::vector<Mask> kept[3];
      bool dropped_any = false;
      for (int i = 0; i < 3; ++i) {
        for (Mask a : fams[i]->members) {
          if ((a & b0) != xs[i]) {
            dropped_any = true;
            continue;
          }
          Mask stripped = a & ~b0;
          bool bal = true;
          for (Mask bl : bp.blocks)
            if (!is_balanced_onto(stripped, bl, delta, fam_r)) {
              bal = false;
              break;
            }
          if (!bal) {
            dropped_any = true;
            continue;
          }
          kept[i].push_back(stripped);
        }
        if (kept[i].empty()) return;
      }
      ++st.block_solver_calls;
      if (solve_block_balanced_masks(kept[0], kept[1], kept[2], bp.blocks, ctx.blocks,
                                     theory_cutoff))
        verdict = true;
      // A fault-free member with no filtering losses is already exact.
      if (b0 == 0 && !dropped_any) exact_member = true;
    });
    if (verdict) {
      st.exact = true;
      return true;
    }
    if (exact_member) {
      st.exact = true;
      return false;
    }
  }

  if (opts.exact_fallback && n <= 14) {
    ++st.block_solver_calls;
    std::vector<Mask> one_block = {f1.universe.full_mask()};
    st.exact = true;
    return solve_block_balanced_masks(f1.members, f2.members, f3.members, one_block, ctx.blocks);
  }
  st.exact = false;
  return false;
}

}  // namespace trichrome

#endif  // TRICHROME_TRIPARTITION_HPP
