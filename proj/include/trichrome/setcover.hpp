#ifndef TRICHROME_SETCOVER_HPP
#define TRICHROME_SETCOVER_HPP

#include <array>
#include <unordered_map>
#include <vector>

#include "trichrome/kcover.hpp"
#include "trichrome/rational.hpp"
#include "trichrome/sets.hpp"

namespace trichrome {

struct CoverInstance {
  Universe universe{1};
  SetFamily family;
  int t = 1;
  Rational delta;
};

/// Greedy split of nonnegative reals summing to 1, each at most delta < 1/4,
/// into three index sets each of weight at most 1/2 - kappa where
/// kappa = (1/2 - 2*delta)/3. Fill the first set while the next element still
/// fits under the bound, then the second, remainder to the third.
inline std::array<std::vector<int>, 3> greedy_real_partition(const std::vector<Rational>& a,
                                                             const Rational& delta) {
  if (!(delta < Rational(1, 4))) throw domain_error("delta must be strictly below 1/4");
  Rational total(0);
  for (const Rational& v : a) {
    if (v < 0) throw domain_error("weights must be nonnegative");
    if (v > delta) throw domain_error("every weight must be at most delta");
    total += v;
  }
  if (total != 1) throw domain_error("weights must sum to 1");
  Rational kappa = (Rational(1, 2) - 2 * delta) / 3;
  Rational bound = Rational(1, 2) - kappa;
  std::array<std::vector<int>, 3> parts;
  Rational sum(0);
  std::size_t i = 0;
  for (int part = 0; part < 2; ++part) {
    sum = 0;
    while (i < a.size() && sum + a[i] <= bound) {
      sum += a[i];
      parts[part].push_back(static_cast<int>(i));
      ++i;
    }
  }
  sum = 0;
  for (; i < a.size(); ++i) {
    parts[2].push_back(static_cast<int>(i));
    sum += a[i];
  }
  if (sum > bound) throw domain_error("greedy partition violated its bound");
  return parts;
}

/// Exhaustive t-cover oracle: can the union of t family members (repeats
/// allowed) be the full universe? Memoized on (covered mask, sets left).
inline bool brute_setcover(const CoverInstance& inst) {
  Mask full = inst.universe.full_mask();
  std::unordered_map<std::uint64_t, bool> memo;
  auto rec = [&](auto&& self, Mask covered, int left) -> bool {
    if (covered == full) return true;
    if (left == 0) return false;
    std::uint64_t key = (std::uint64_t(covered) << 6) | std::uint64_t(left);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool ok = false;
    for (Mask m : inst.family.members)
      if ((m & ~covered) && self(self, covered | m, left - 1)) {
        ok = true;
        break;
      }
    return memo.emplace(key, ok).first->second;
  };
  return rec(rec, 0, inst.t);
}

/// Decides t-coverability of the universe by a delta-bounded family through
/// the balanced-cover detector with nu = 1/2 - kappa, kappa = (1/2 - 2*delta)/3.
/// Complete because every t-cover from a delta-bounded family is nu-balanced:
/// the greedy real partition regroups it into three unions each below nu*n.
inline bool solve_setcover(const CoverInstance& inst, TripartitionContext& ctx,
                           const KCoverOptions& opts = {}) {
  if (!(inst.delta < Rational(1, 4)))
    throw domain_error(
        "delta must be strictly below 1/4: with delta = 1/4 the singleton family "
        "{{1},{2},{3},{4}} over [4] has an unbalanced 4-cover and no balanced one");
  if (inst.delta <= 0) throw domain_error("delta must be positive");
  if (inst.t < 1) throw domain_error("t must be positive");
  const int n = inst.universe.n;
  Rational cap = inst.delta * n;
  for (Mask m : inst.family.members)
    if (Rational(popcount(m)) > cap) throw domain_error("family is not delta-bounded");
  Mask full = inst.universe.full_mask();
  // One or two sets: direct union tests (the balanced detector needs t >= 3).
  if (inst.t <= 2 || inst.family.members.empty()) {
    for (Mask m : inst.family.members) {
      if (m == full) return true;
      if (inst.t >= 2)
        for (Mask m2 : inst.family.members)
          if ((m | m2) == full) return true;
    }
    return false;
  }
  Rational kappa = (Rational(1, 2) - 2 * inst.delta) / 3;
  Rational nu = Rational(1, 2) - kappa;
  return detect_balanced_k_cover(inst.family, inst.t, nu, ctx, opts);
}

}  // namespace trichrome

#endif  // TRICHROME_SETCOVER_HPP
