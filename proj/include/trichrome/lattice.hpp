#ifndef TRICHROME_LATTICE_HPP
#define TRICHROME_LATTICE_HPP

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "trichrome/rational.hpp"
#include "trichrome/sets.hpp"

namespace trichrome {

/// A subset-closed index family in canonical order (colexicographic, i.e.
/// ascending bitmask value), deduplicated, with O(1) index lookup.
class SubsetClosedFamily {
public:
  SubsetClosedFamily() = default;

  SubsetClosedFamily(Universe u, std::vector<Mask> masks) : universe_(u) {
    std::sort(masks.begin(), masks.end());
    masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
    masks_ = std::move(masks);
    index_.reserve(masks_.size() * 2);
    for (std::size_t i = 0; i < masks_.size(); ++i) index_.emplace(masks_[i], i);
    for (Mask x : masks_) {
      if (!universe_.contains(x)) throw domain_error("index family member outside universe");
      for (Mask rest = x; rest; rest &= rest - 1) {
        Mask without = x & ~(rest & -rest);
        if (!index_.contains(without)) throw domain_error("index family is not closed under subsets");
      }
    }
  }

  static SubsetClosedFamily all_subsets_up_to(Universe u, int max_size) {
    std::vector<Mask> masks;
    Mask full = u.full_mask();
    for (Mask m = 0;; ++m) {
      if (popcount(m) <= max_size) masks.push_back(m);
      if (m == full) break;
    }
    return SubsetClosedFamily(u, std::move(masks));
  }

  const Universe& universe() const { return universe_; }
  const std::vector<Mask>& masks() const { return masks_; }
  std::size_t size() const { return masks_.size(); }

  bool contains(Mask m) const { return index_.contains(m); }
  std::size_t index_of(Mask m) const {
    auto it = index_.find(m);
    if (it == index_.end()) throw domain_error("mask not in index family");
    return it->second;
  }

private:
  Universe universe_;
  std::vector<Mask> masks_;
  std::unordered_map<Mask, std::size_t> index_;
};

/// One exact value per member of a subset-closed family.
template <class Scalar = Rational>
struct LatticeVector {
  SubsetClosedFamily family;
  std::vector<Scalar> values;

  LatticeVector() = default;
  LatticeVector(SubsetClosedFamily f, std::vector<Scalar> v) : family(std::move(f)), values(std::move(v)) {
    if (values.size() != family.size()) throw domain_error("lattice vector length mismatch");
  }

  static LatticeVector zero(SubsetClosedFamily f) {
    std::size_t n = f.size();
    return LatticeVector(std::move(f), std::vector<Scalar>(n, Scalar(0)));
  }

  Scalar& at(Mask m) { return values[family.index_of(m)]; }
  const Scalar& at(Mask m) const { return values[family.index_of(m)]; }
};

/// g(X) = sum over Y ⊆ X, Y in the family, of alpha^{|X\Y|} f(Y).
/// Layered in-place dynamic program, <= 2·n·|family| arithmetic operations.
template <class Scalar>
LatticeVector<Scalar> down_transform(const LatticeVector<Scalar>& f, const Scalar& alpha,
                                     OpCounter* ops = nullptr) {
  LatticeVector<Scalar> g = f;
  const auto& fam = g.family;
  const int n = fam.universe().n;
  for (int i = 0; i < n; ++i) {
    const Mask bit = Mask(1) << i;
    for (std::size_t idx = 0; idx < fam.size(); ++idx) {
      Mask x = fam.masks()[idx];
      if (!(x & bit)) continue;
      g.values[idx] += alpha * g.values[fam.index_of(x ^ bit)];
      if (ops) {
        ++ops->adds;
        ++ops->muls;
      }
    }
  }
  return g;
}

/// g(X) = sum over Y ⊇ X, Y in the family, of alpha^{|Y\X|} f(Y).
template <class Scalar>
LatticeVector<Scalar> up_transform(const LatticeVector<Scalar>& f, const Scalar& alpha,
                                   OpCounter* ops = nullptr) {
  LatticeVector<Scalar> g = f;
  const auto& fam = g.family;
  const int n = fam.universe().n;
  for (int i = 0; i < n; ++i) {
    const Mask bit = Mask(1) << i;
    for (std::size_t idx = 0; idx < fam.size(); ++idx) {
      Mask x = fam.masks()[idx];
      if (x & bit) continue;
      if (!fam.contains(x | bit)) continue;
      g.values[idx] += alpha * g.values[fam.index_of(x | bit)];
      if (ops) {
        ++ops->adds;
        ++ops->muls;
      }
    }
  }
  return g;
}

/// 0/1 vector over U marking the sets contained in some member of F
/// (the downward closure of F), via an upward sum clipped to 1.
template <class Scalar = Rational>
LatticeVector<Scalar> downward_closure_indicator(const SetFamily& f, const SubsetClosedFamily& u,
                                                 OpCounter* ops = nullptr) {
  auto vec = LatticeVector<Scalar>::zero(u);
  for (Mask m : f.members) {
    if (!u.contains(m)) throw domain_error("family member not in index family");
    vec.values[u.index_of(m)] = Scalar(1);
  }
  auto lifted = up_transform(vec, Scalar(1), ops);
  for (auto& v : lifted.values)
    if (v != 0) v = Scalar(1);
  return lifted;
}

/// h^t(X): the number of ordered t-tuples from the downward closure of F,
/// all contained in X, whose union is exactly X. Pipeline: downward sum of the
/// closure indicator, pointwise t-th power, inverse downward sum (alpha = -1).
template <class Scalar = Rational>
LatticeVector<Scalar> count_t_covers(const SetFamily& f, const SubsetClosedFamily& u, int t,
                                     OpCounter* ops = nullptr) {
  if (t < 1) throw domain_error("t must be a positive integer");
  auto closure = downward_closure_indicator<Scalar>(f, u, ops);
  auto g = down_transform(closure, Scalar(1), ops);
  for (auto& v : g.values) {
    Scalar p(1);
    for (int i = 0; i < t; ++i) {
      p *= v;
      if (ops) ++ops->muls;
    }
    v = p;
  }
  return down_transform(g, Scalar(-1), ops);
}

/// The members X of U with at least one t-cover from F, in canonical order.
inline SetFamily list_t_covered(const SetFamily& f, const SubsetClosedFamily& u, int t,
                                OpCounter* ops = nullptr) {
  auto counts = count_t_covers<Int>(f, u, t, ops);
  SetFamily out;
  out.universe = u.universe();
  for (std::size_t i = 0; i < u.size(); ++i)
    if (counts.values[i] > 0) out.members.push_back(u.masks()[i]);
  return out;
}

}  // namespace trichrome

#endif  // TRICHROME_LATTICE_HPP
