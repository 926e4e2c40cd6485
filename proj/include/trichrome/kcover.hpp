#ifndef TRICHROME_KCOVER_HPP
#define TRICHROME_KCOVER_HPP

#include <map>
#include <vector>

#include "trichrome/lattice.hpp"
#include "trichrome/rational.hpp"
#include "trichrome/sets.hpp"
#include "trichrome/tripartition.hpp"

namespace trichrome {

struct KCoverOptions {
  Rational delta = Rational(1, 100);  // balance slack of the inner tripartition solver
  TripartitionOptions tri{};
};

namespace detail {

/// h^k([n]) > 0: is the full universe k-coverable by the family's downward
/// closure? Computed over the full lattice 2^[n] with a single signed sum.
inline bool full_universe_k_coverable(const SetFamily& f, int k) {
  const int n = f.universe.n;
  if (n > 25) throw resource_error("coverability check limited to n <= 25");
  auto u = SubsetClosedFamily::all_subsets_up_to(f.universe, n);
  auto closure = downward_closure_indicator<Int>(f, u);
  auto g = down_transform(closure, Int(1));
  Int total = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    Int p = 1;
    for (int j = 0; j < k; ++j) p *= g.values[i];
    if ((n - popcount(u.masks()[i])) % 2)
      total -= p;
    else
      total += p;
  }
  return total > 0;
}

}  // namespace detail

/// Decides whether [n] admits a nu-balanced k-cover from F: builds the
/// t-covered nu-bounded lists U_t and asks for a tripartition of [n] from
/// (U_{k1}, U_{k2}, U_{k3}) over the group size splits of k. True implies a
/// k-cover exists; a balanced k-cover implies true (overlapping group unions
/// shrink to a tripartition because covered sets are downward closed).
inline bool detect_balanced_k_cover(const SetFamily& f, int k, const Rational& nu,
                                    TripartitionContext& ctx, const KCoverOptions& opts = {}) {
  if (!(Rational(1, 3) <= nu && nu < Rational(1, 2)))
    throw domain_error("nu must lie in [1/3, 1/2)");
  const int n = f.universe.n;
  // Three positive group sizes need k >= 3; with fewer sets the nu-bounded
  // unions cannot reach n since 2*nu*n < n.
  if (k < 3) return false;
  if (n > 25) throw resource_error("balanced cover detection limited to n <= 25");

  SetFamily bounded;
  bounded.universe = f.universe;
  Rational size_bound = nu * n;
  for (Mask m : f.members)
    if (Rational(popcount(m)) <= size_bound) bounded.members.push_back(m);
  if (bounded.members.empty()) return false;

  // Cheap exact pre-filter: no k-cover at all means no balanced one.
  if (!detail::full_universe_k_coverable(bounded, k)) return false;

  int s = static_cast<int>(to_int64(floor_rational(size_bound)));
  auto u = SubsetClosedFamily::all_subsets_up_to(f.universe, s);
  auto closure = downward_closure_indicator<Int>(bounded, u);
  auto g = down_transform(closure, Int(1));

  std::map<int, SetFamily> lists;
  auto covered_list = [&](int t) -> const SetFamily& {
    auto it = lists.find(t);
    if (it != lists.end()) return it->second;
    auto powered = g;
    for (std::size_t i = 0; i < powered.values.size(); ++i) {
      Int p = 1;
      for (int j = 0; j < t; ++j) p *= g.values[i];
      powered.values[i] = p;
    }
    auto h = down_transform(powered, Int(-1));
    SetFamily out;
    out.universe = f.universe;
    for (std::size_t i = 0; i < u.size(); ++i)
      if (h.values[i] > 0) out.members.push_back(u.masks()[i]);
    return lists.emplace(t, std::move(out)).first->second;
  };

  // The tripartition verdict is symmetric in the three families, so only
  // nondecreasing splits are solved.
  for (int k1 = 1; 3 * k1 <= k; ++k1)
    for (int k2 = k1; k1 + 2 * k2 <= k; ++k2) {
      int k3 = k - k1 - k2;
      if (solve_tripartition(covered_list(k1), covered_list(k2), covered_list(k3), nu, opts.delta,
                             ctx, opts.tri))
        return true;
    }
  return false;
}

}  // namespace trichrome

#endif  // TRICHROME_KCOVER_HPP
