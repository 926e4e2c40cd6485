#ifndef TRICHROME_TENSOR_HPP
#define TRICHROME_TENSOR_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "trichrome/rational.hpp"
#include "trichrome/sets.hpp"

namespace trichrome {

inline constexpr std::uint64_t kDefaultNnzCap = 10'000'000;

/// One Kronecker factor of a structured leg index: a subset of [k].
struct LabelAtom {
  int k = 0;
  Mask subset = 0;
  friend bool operator==(const LabelAtom&, const LabelAtom&) = default;
};

using LegLabel = std::vector<LabelAtom>;

/// A 3-leg trilinear form with exact rational coefficients, stored sparsely.
struct SparseTensor {
  std::array<std::uint64_t, 3> dims{0, 0, 0};

  struct Entry {
    std::array<std::uint64_t, 3> idx;
    Rational coeff;
  };
  std::vector<Entry> entries;  // sorted lexicographically by idx, no zero coefficients

  // Optional per-leg label tables; when present, labels[leg].size() == dims[leg].
  std::array<std::vector<LegLabel>, 3> labels;

  std::uint64_t nnz() const { return entries.size(); }
  bool is_cubic() const { return dims[0] == dims[1] && dims[1] == dims[2]; }
  bool has_labels() const {
    return labels[0].size() == dims[0] && labels[1].size() == dims[1] && labels[2].size() == dims[2];
  }

  void sort_entries() {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.idx < b.idx; });
  }

  bool all_coeffs_integer() const {
    for (const auto& e : entries)
      if (denominator(e.coeff) != 1) return false;
    return true;
  }

  bool all_coeffs_nonnegative() const {
    for (const auto& e : entries)
      if (e.coeff < 0) return false;
    return true;
  }
};

/// Subsets of [k] of size <= m, in ascending bitmask order.
inline std::vector<Mask> bounded_subsets(int k, int m) {
  std::vector<Mask> out;
  Mask full = (k >= 64) ? ~Mask(0) : ((Mask(1) << k) - 1);
  if (k > 62) throw domain_error("subset universe too large");
  for (Mask s = 0;; ++s) {
    if (popcount(s) <= m) out.push_back(s);
    if (s == full) break;
  }
  return out;
}

/// T_{tau,k}: coefficient 1 on every ordered tripartition I ∪̇ J ∪̇ K = [k]
/// with |I|,|J|,|K| <= ceil(tau*k); legs indexed by subsets of size <= ceil(tau*k).
inline SparseTensor partitioning_tensor(const Rational& tau, int k) {
  if (tau <= 0 || tau > 1) throw domain_error("tau must satisfy 0 < tau <= 1");
  if (k < 1 || k > 25) throw domain_error("partitioning tensor universe size out of range");
  const int m = static_cast<int>(to_int64(ceil_rational(tau * k)));
  std::vector<Mask> legs = bounded_subsets(k, m);
  std::unordered_map<Mask, std::uint64_t> pos;
  for (std::uint64_t i = 0; i < legs.size(); ++i) pos.emplace(legs[i], i);

  SparseTensor t;
  t.dims = {legs.size(), legs.size(), legs.size()};
  for (int leg = 0; leg < 3; ++leg) {
    t.labels[leg].reserve(legs.size());
    for (Mask s : legs) t.labels[leg].push_back({{k, s}});
  }
  Mask full = (Mask(1) << k) - 1;
  for_each_three_partition(full, [&](Mask i, Mask j, Mask kk) {
    if (popcount(i) > m || popcount(j) > m || popcount(kk) > m) return;
    t.entries.push_back({{pos.at(i), pos.at(j), pos.at(kk)}, Rational(1)});
  });
  t.sort_entries();
  return t;
}

/// Direct sum of partitioning tensors for universe sizes 1..B, with per-part
/// size cutoff m. Legs indexed by pairs (k, S), k ascending then S ascending.
inline SparseTensor block_sum_tensor_cutoff(int cutoff, int B) {
  if (B < 1 || B > 25) throw domain_error("block size bound out of range");
  if (cutoff < 0) throw domain_error("negative cutoff");
  std::vector<LegLabel> legs;
  std::unordered_map<std::uint64_t, std::uint64_t> pos;  // key: k*2^26 + subset
  auto key = [](int k, Mask s) { return (std::uint64_t(k) << 26) | s; };
  for (int k = 1; k <= B; ++k)
    for (Mask s : bounded_subsets(k, std::min(cutoff, k))) {
      pos.emplace(key(k, s), legs.size());
      legs.push_back({{k, s}});
    }

  SparseTensor t;
  t.dims = {legs.size(), legs.size(), legs.size()};
  for (int leg = 0; leg < 3; ++leg) t.labels[leg] = legs;
  for (int k = 1; k <= B; ++k) {
    Mask full = (Mask(1) << k) - 1;
    for_each_three_partition(full, [&](Mask i, Mask j, Mask kk) {
      if (popcount(i) > cutoff || popcount(j) > cutoff || popcount(kk) > cutoff) return;
      t.entries.push_back({{pos.at(key(k, i)), pos.at(key(k, j)), pos.at(key(k, kk))}, Rational(1)});
    });
  }
  t.sort_entries();
  return t;
}

/// Leg-dimension bound B^3 · 2^{H(nu')·B} (valid for nu' < 1/2, b <= B).
inline double block_sum_leg_bound(const Rational& nu_prime, int B) {
  double p = static_cast<double>(numerator(nu_prime)) / static_cast<double>(denominator(nu_prime));
  double h = 0.0;
  if (p > 0.0 && p < 1.0) h = -p * std::log2(p) - (1 - p) * std::log2(1 - p);
  return std::pow(double(B), 3) * std::exp2(h * B);
}

/// Block direct-sum tensor with cutoff ceil(nu'*b); requires nu' < 1/2 and
/// b <= B, and checks the leg-dimension bound.
inline SparseTensor block_sum_tensor(const Rational& nu_prime, const Rational& b, int B) {
  if (!(nu_prime > 0 && nu_prime < Rational(1, 2))) throw domain_error("nu' must lie in (0, 1/2)");
  if (b > B) throw domain_error("ideal block size b must not exceed max block size B");
  const int cutoff = static_cast<int>(to_int64(ceil_rational(nu_prime * b)));
  SparseTensor t = block_sum_tensor_cutoff(cutoff, B);
  if (static_cast<double>(t.dims[0]) > block_sum_leg_bound(nu_prime, B))
    throw domain_error("block-sum tensor leg dimension exceeds its entropy bound");
  return t;
}

/// M_n = sum X_{ij} Y_{jk} Z_{ki}; legs of dimension n^2, pair (a,b) at index
/// (a-1)*n + (b-1).
inline SparseTensor matrix_mult_tensor(int n) {
  if (n < 1) throw domain_error("matrix size must be positive");
  SparseTensor t;
  std::uint64_t nn = std::uint64_t(n) * n;
  t.dims = {nn, nn, nn};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        t.entries.push_back({{std::uint64_t(i) * n + j, std::uint64_t(j) * n + k, std::uint64_t(k) * n + i},
                             Rational(1)});
  t.sort_entries();
  return t;
}

/// Kronecker product; paired index (outer, inner) packs row-major with the
/// left operand as the outer index. Labels concatenate when both present.
inline SparseTensor kronecker(const SparseTensor& a, const SparseTensor& b) {
  SparseTensor t;
  for (int leg = 0; leg < 3; ++leg) {
    if (b.dims[leg] != 0 && a.dims[leg] > ~std::uint64_t(0) / b.dims[leg])
      throw resource_error("kronecker dimensions overflow");
    t.dims[leg] = a.dims[leg] * b.dims[leg];
  }
  t.entries.reserve(a.entries.size() * b.entries.size());
  for (const auto& ea : a.entries)
    for (const auto& eb : b.entries) {
      SparseTensor::Entry e;
      for (int leg = 0; leg < 3; ++leg) e.idx[leg] = ea.idx[leg] * b.dims[leg] + eb.idx[leg];
      e.coeff = ea.coeff * eb.coeff;
      if (e.coeff != 0) t.entries.push_back(std::move(e));
    }
  if (a.has_labels() && b.has_labels()) {
    for (int leg = 0; leg < 3; ++leg) {
      t.labels[leg].reserve(t.dims[leg]);
      for (const auto& la : a.labels[leg])
        for (const auto& lb : b.labels[leg]) {
          LegLabel l = la;
          l.insert(l.end(), lb.begin(), lb.end());
          t.labels[leg].push_back(std::move(l));
        }
    }
  }
  t.sort_entries();
  return t;
}

/// r-fold Kronecker power, folded left to right. Refuses to materialize past
/// the nnz cap.
inline SparseTensor kronecker_power(const SparseTensor& t, int r, std::uint64_t cap = kDefaultNnzCap) {
  if (r < 1) throw domain_error("Kronecker power must be positive");
  double projected = std::pow(static_cast<double>(t.nnz()), r);
  if (projected > static_cast<double>(cap))
    throw resource_error("Kronecker power materialization exceeds nnz cap");
  SparseTensor p = t;
  for (int i = 1; i < r; ++i) p = kronecker(p, t);
  return p;
}

/// Relabels a power of a partitioning tensor over [k] so each leg index
/// becomes a single subset of [r*k]: factor u's subset is shifted by (u-1)*k
/// and the shifts are unioned. Output legs are indexed by the mask itself.
inline SparseTensor remap_partition_indices(const SparseTensor& t_power, int k, int r) {
  if (!t_power.has_labels()) throw domain_error("remap requires label metadata");
  if (r < 1 || k < 1 || r * k > 25) throw domain_error("remap target universe too large");
  auto remap_label = [&](const LegLabel& l) -> std::uint64_t {
    if (static_cast<int>(l.size()) != r) throw domain_error("label factor count does not match power");
    Mask out = 0;
    for (int u = 0; u < r; ++u) {
      if (l[u].k != k) throw domain_error("label universe mismatch");
      out |= l[u].subset << (u * k);
    }
    return out;
  };
  SparseTensor out;
  std::uint64_t dim = std::uint64_t(1) << (r * k);
  out.dims = {dim, dim, dim};
  for (int leg = 0; leg < 3; ++leg) {
    out.labels[leg].resize(dim);
    for (std::uint64_t m = 0; m < dim; ++m) out.labels[leg][m] = {{r * k, Mask(m)}};
  }
  for (const auto& e : t_power.entries) {
    SparseTensor::Entry ne;
    for (int leg = 0; leg < 3; ++leg) ne.idx[leg] = remap_label(t_power.labels[leg][e.idx[leg]]);
    ne.coeff = e.coeff;
    out.entries.push_back(std::move(ne));
  }
  out.sort_entries();
  for (std::size_t i = 1; i < out.entries.size(); ++i)
    if (out.entries[i].idx == out.entries[i - 1].idx)
      throw domain_error("remap produced colliding support triples");
  return out;
}

// ---------------------------------------------------------------------------
// Rank decompositions
// ---------------------------------------------------------------------------

/// Certificate sum_l A[l,I]·B[l,J]·C[l,K] = (T^{⊗s})_{I,J,K} for a cubic base
/// tensor with leg dimension c. Matrices are d x c^s, stored as sparse rows.
struct Decomposition {
  std::uint64_t c = 0;
  int s = 1;
  std::uint64_t rank = 0;
  using Row = std::vector<std::pair<std::uint64_t, Rational>>;  // sorted by column
  std::array<std::vector<Row>, 3> rows;                         // A, B, C

  std::uint64_t cols() const {
    std::uint64_t out = 1;
    for (int i = 0; i < s; ++i) out *= c;
    return out;
  }

  bool all_integer() const {
    for (const auto& mat : rows)
      for (const auto& row : mat)
        for (const auto& [col, v] : row)
          if (denominator(v) != 1) return false;
    return true;
  }

  bool all_nonnegative() const {
    for (const auto& mat : rows)
      for (const auto& row : mat)
        for (const auto& [col, v] : row)
          if (v < 0) return false;
    return true;
  }

  Rational entry(int mat, std::uint64_t row, std::uint64_t col) const {
    const Row& r = rows[mat][row];
    auto it = std::lower_bound(r.begin(), r.end(), col,
                               [](const auto& p, std::uint64_t c_) { return p.first < c_; });
    if (it != r.end() && it->first == col) return it->second;
    return Rational(0);
  }
};

/// One rank-one term per support element of T^{⊗s}; rank nnz(T)^s.
inline Decomposition trivial_decomposition(const SparseTensor& t, int s,
                                           std::uint64_t cap = kDefaultNnzCap) {
  if (!t.is_cubic()) throw domain_error("trivial decomposition requires a cubic tensor");
  SparseTensor power = kronecker_power(t, s, cap);
  Decomposition d;
  d.c = t.dims[0];
  d.s = s;
  d.rank = power.nnz();
  for (int leg = 0; leg < 3; ++leg) d.rows[leg].reserve(power.nnz());
  for (const auto& e : power.entries) {
    d.rows[0].push_back({{e.idx[0], e.coeff}});
    d.rows[1].push_back({{e.idx[1], Rational(1)}});
    d.rows[2].push_back({{e.idx[2], Rational(1)}});
  }
  return d;
}

/// Checks the defining identity of a decomposition against T^{⊗s}: full
/// sparse expansion of the rank-one terms when feasible (c^s <= 4096 and the
/// expansion work is within budget), otherwise 100 deterministic spot triples.
inline bool verify_decomposition(const Decomposition& d, const SparseTensor& t,
                                 std::string* why = nullptr) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (!t.is_cubic() || t.dims[0] != d.c) return fail("base tensor leg dimension mismatch");
  const std::uint64_t cs = d.cols();
  for (int mat = 0; mat < 3; ++mat) {
    if (d.rows[mat].size() != d.rank) return fail("matrix row count differs from rank");
    for (const auto& row : d.rows[mat])
      for (const auto& [col, v] : row) {
        if (col >= cs) return fail("matrix column index out of range");
        (void)v;
      }
  }

  SparseTensor power = kronecker_power(t, d.s);
  std::unordered_map<std::uint64_t, Rational> target;  // packed idx -> coeff
  auto pack = [&](std::uint64_t i, std::uint64_t j, std::uint64_t k) { return (i * cs + j) * cs + k; };
  for (const auto& e : power.entries) target.emplace(pack(e.idx[0], e.idx[1], e.idx[2]), e.coeff);

  double expansion_cost = 0;
  for (std::uint64_t l = 0; l < d.rank; ++l)
    expansion_cost += double(d.rows[0][l].size()) * double(d.rows[1][l].size()) * double(d.rows[2][l].size());

  if (cs <= 4096 && expansion_cost <= 5e7 && cs * cs <= (std::uint64_t(1) << 40)) {
    std::unordered_map<std::uint64_t, Rational> sum;
    for (std::uint64_t l = 0; l < d.rank; ++l)
      for (const auto& [i, a] : d.rows[0][l])
        for (const auto& [j, b] : d.rows[1][l])
          for (const auto& [k, cc] : d.rows[2][l]) {
            Rational v = a * b * cc;
            if (v != 0) sum[pack(i, j, k)] += v;
          }
    for (auto it = sum.begin(); it != sum.end();) {
      if (it->second == 0)
        it = sum.erase(it);
      else
        ++it;
    }
    if (sum.size() != target.size()) return fail("expanded support differs from tensor support");
    for (const auto& [key, v] : target) {
      auto it = sum.find(key);
      if (it == sum.end() || it->second != v) return fail("expanded coefficient mismatch");
    }
    return true;
  }

  // Spot checks: the support entries first, then LCG-drawn triples.
  std::vector<std::array<std::uint64_t, 3>> probes;
  for (const auto& e : power.entries) {
    probes.push_back(e.idx);
    if (probes.size() >= 50) break;
  }
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  while (probes.size() < 100) {
    auto draw = [&]() {
      state = state * 6364136223846793005ull + 1442695040888963407ull;
      return (state >> 17) % cs;
    };
    probes.push_back({draw(), draw(), draw()});
  }
  for (const auto& p : probes) {
    Rational lhs(0);
    for (std::uint64_t l = 0; l < d.rank; ++l)
      lhs += d.entry(0, l, p[0]) * d.entry(1, l, p[1]) * d.entry(2, l, p[2]);
    auto it = target.find(pack(p[0], p[1], p[2]));
    Rational rhs = (it == target.end()) ? Rational(0) : it->second;
    if (lhs != rhs) return fail("spot-check coefficient mismatch");
  }
  return true;
}

// --- Decomposition text format ---------------------------------------------
// tensor-decomp v1
// c <c>
// s <s>
// d <d>
// A            (then d lines of c^s rationals, row-major over [c]^s)
// B            (likewise)
// C            (likewise)

inline Decomposition parse_decomposition(std::istream& in) {
  std::string line;
  int line_no = 0;
  auto next_line = [&]() {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  auto err = [&](const std::string& msg) -> parse_error {
    return parse_error("line " + std::to_string(line_no) + ": " + msg);
  };

  if (!next_line() || line != "tensor-decomp v1") throw err("expected header 'tensor-decomp v1'");
  Decomposition d;
  std::uint64_t rank = 0;
  auto read_scalar_line = [&](const std::string& tag) -> std::uint64_t {
    if (!next_line()) throw err("unexpected end of file");
    std::istringstream ss(line);
    std::string t;
    std::uint64_t v;
    if (!(ss >> t >> v) || t != tag) throw err("expected '" + tag + " <value>'");
    return v;
  };
  d.c = read_scalar_line("c");
  d.s = static_cast<int>(read_scalar_line("s"));
  rank = read_scalar_line("d");
  if (d.c < 1 || d.s < 1 || rank < 1) throw err("c, s, d must be positive");
  d.rank = rank;
  const std::uint64_t cs = d.cols();

  const char* names[3] = {"A", "B", "C"};
  for (int mat = 0; mat < 3; ++mat) {
    if (!next_line() || line != names[mat]) throw err(std::string("expected block '") + names[mat] + "'");
    d.rows[mat].resize(rank);
    for (std::uint64_t row = 0; row < rank; ++row) {
      if (!next_line()) throw err("unexpected end of file in matrix block");
      std::istringstream ss(line);
      std::string tok;
      std::uint64_t col = 0;
      while (ss >> tok) {
        if (col >= cs) throw err("too many entries in matrix row");
        Rational v = parse_rational(tok);
        if (v != 0) d.rows[mat][row].push_back({col, v});
        ++col;
      }
      if (col != cs) throw err("matrix row has " + std::to_string(col) + " entries, expected " +
                               std::to_string(cs));
    }
  }
  return d;
}

inline void write_decomposition(std::ostream& out, const Decomposition& d) {
  out << "tensor-decomp v1\n";
  out << "c " << d.c << "\n";
  out << "s " << d.s << "\n";
  out << "d " << d.rank << "\n";
  const std::uint64_t cs = d.cols();
  const char* names[3] = {"A", "B", "C"};
  for (int mat = 0; mat < 3; ++mat) {
    out << names[mat] << "\n";
    for (const auto& row : d.rows[mat]) {
      std::uint64_t col = 0;
      for (std::uint64_t c = 0; c < cs; ++c) {
        if (c) out << ' ';
        auto it = std::lower_bound(row.begin(), row.end(), c,
                                   [](const auto& p, std::uint64_t x) { return p.first < x; });
        if (it != row.end() && it->first == c)
          out << rational_to_string(it->second);
        else
          out << '0';
        ++col;
      }
      out << "\n";
    }
  }
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Reference oracle: sum over stored entries of a_{ijk}·x_i·y_j·z_k.
inline Rational direct_evaluate(const SparseTensor& t, const std::vector<Rational>& x,
                                const std::vector<Rational>& y, const std::vector<Rational>& z) {
  if (x.size() != t.dims[0] || y.size() != t.dims[1] || z.size() != t.dims[2])
    throw domain_error("vector length does not match tensor dimensions");
  Rational acc(0);
  for (const auto& e : t.entries) acc += e.coeff * x[e.idx[0]] * y[e.idx[1]] * z[e.idx[2]];
  return acc;
}

template <class Scalar>
using SparseVec = std::unordered_map<std::uint64_t, Scalar>;

namespace detail {

/// Column-major view of one decomposition matrix: per column, (row, coeff).
template <class Scalar>
std::vector<std::vector<std::pair<std::uint64_t, Scalar>>> columns_of(
    const std::vector<Decomposition::Row>& rows, std::uint64_t ncols) {
  std::vector<std::vector<std::pair<std::uint64_t, Scalar>>> cols(ncols);
  for (std::uint64_t r = 0; r < rows.size(); ++r)
    for (const auto& [c, v] : rows[r]) {
      if constexpr (std::is_same_v<Scalar, Rational>) {
        cols[c].push_back({r, v});
      } else {
        cols[c].push_back({r, Scalar(numerator(v))});
      }
    }
  return cols;
}

/// One Yates pass: applies a matrix (given column-major) to factor position
/// `t` of a mixed-radix sparse vector. lo = product of radices right of t.
template <class Scalar>
SparseVec<Scalar> yates_pass(const SparseVec<Scalar>& in, std::uint64_t f_in, std::uint64_t f_out,
                             std::uint64_t lo,
                             const std::vector<std::vector<std::pair<std::uint64_t, Scalar>>>& cols,
                             OpCounter* ops) {
  SparseVec<Scalar> out;
  out.reserve(in.size() * 2);
  const std::uint64_t in_span = f_in * lo;
  const std::uint64_t out_span = f_out * lo;
  for (const auto& [idx, val] : in) {
    std::uint64_t hi = idx / in_span;
    std::uint64_t mid = (idx % in_span) / lo;
    std::uint64_t lo_part = idx % lo;
    for (const auto& [row, coeff] : cols[mid]) {
      out[hi * out_span + row * lo + lo_part] += coeff * val;
      if (ops) {
        ++ops->adds;
        ++ops->muls;
      }
    }
  }
  return out;
}

/// Full hat transform: (M̃^{⊗q} ⊗ M^{⊗rem}) applied to a sparse vector over
/// [c]^r grouped as ([c]^s)^q × [c]^rem, leftmost factor outermost.
template <class Scalar>
SparseVec<Scalar> hat_transform(const SparseVec<Scalar>& input, int leg, const Decomposition& d,
                                const Decomposition* base, int q, int rem, OpCounter* ops) {
  const std::uint64_t cs = d.cols();
  const std::uint64_t c = d.c;
  const std::uint64_t d_rank = d.rank;
  const std::uint64_t base_rank = base ? base->rank : 0;

  auto main_cols = columns_of<Scalar>(d.rows[leg], cs);
  std::vector<std::vector<std::pair<std::uint64_t, Scalar>>> base_cols;
  if (rem > 0) base_cols = columns_of<Scalar>(base->rows[leg], c);

  SparseVec<Scalar> cur = input;
  // Radices right of factor t: unprocessed main factors, then unprocessed
  // remainder factors (input-sized until their own pass).
  for (int t = 0; t < q + rem; ++t) {
    bool is_main = t < q;
    std::uint64_t lo = 1;
    for (int u = t + 1; u < q + rem; ++u) lo *= (u < q) ? cs : c;
    cur = yates_pass(cur, is_main ? cs : c, is_main ? d_rank : base_rank, lo,
                     is_main ? main_cols : base_cols, ops);
  }
  (void)base_rank;
  return cur;
}

inline void check_index_space(double size) {
  if (size > 9.2e18) throw resource_error("Yates index space exceeds 64-bit addressing");
}

}  // namespace detail

template <class Scalar>
struct YatesResult {
  Scalar value{0};
  OpCounter ops;
};

/// Evaluates T^{⊗r}(x,y,z) via the hat-vector pipeline: three Kronecker-
/// structured transforms (q = floor(r/s) passes with the certificate's
/// matrices, then r - s·q passes with a base (s=1) certificate), followed by
/// the rank-space contraction. Never materializes T^{⊗r}.
///
/// When `early_exit_nonzero` is set the contraction stops at the first
/// nonzero partial sum; this is only requested by callers whose inputs and
/// certificate entries are all nonnegative.
template <class Scalar>
YatesResult<Scalar> yates_evaluate_sparse(const Decomposition& d, const Decomposition* base, int r,
                                          const SparseVec<Scalar>& x, const SparseVec<Scalar>& y,
                                          const SparseVec<Scalar>& z, bool early_exit_nonzero = false) {
  if (r < 1) throw domain_error("power r must be positive");
  const int q = r / d.s;
  const int rem = r - d.s * q;
  if (rem > 0 && base == nullptr)
    throw domain_error("remainder decomposition required when s does not divide r");
  if (rem > 0 && (base->s != 1 || base->c != d.c))
    throw domain_error("remainder decomposition must certify the same base tensor at s = 1");
  detail::check_index_space(std::pow(double(d.c), r));
  detail::check_index_space(std::pow(double(d.rank), q) *
                            std::pow(double(base ? base->rank : 1), rem));

  YatesResult<Scalar> res;
  auto hx = detail::hat_transform(x, 0, d, base, q, rem, &res.ops);
  auto hy = detail::hat_transform(y, 1, d, base, q, rem, &res.ops);
  auto hz = detail::hat_transform(z, 2, d, base, q, rem, &res.ops);

  const SparseVec<Scalar>* smallest = &hx;
  if (hy.size() < smallest->size()) smallest = &hy;
  if (hz.size() < smallest->size()) smallest = &hz;
  const SparseVec<Scalar>* others[2];
  if (smallest == &hx) {
    others[0] = &hy;
    others[1] = &hz;
  } else if (smallest == &hy) {
    others[0] = &hx;
    others[1] = &hz;
  } else {
    others[0] = &hx;
    others[1] = &hy;
  }
  for (const auto& [idx, v] : *smallest) {
    auto it0 = others[0]->find(idx);
    if (it0 == others[0]->end()) continue;
    auto it1 = others[1]->find(idx);
    if (it1 == others[1]->end()) continue;
    res.value += v * it0->second * it1->second;
    res.ops.adds += 1;
    res.ops.muls += 2;
    if (early_exit_nonzero && res.value != 0) break;
  }
  return res;
}

/// Upper bound on the arithmetic operations of the hat pipeline, from the
/// dense pass sizes; the sparse implementation never exceeds it.
inline double yates_op_bound(const Decomposition& d, const Decomposition* base, int r) {
  const int q = r / d.s;
  const int rem = r - d.s * q;
  const double cs = std::pow(double(d.c), d.s);
  const double c = double(d.c);
  const double dr = double(d.rank);
  const double br = base ? double(base->rank) : 1.0;
  double total = 0;
  for (int t = 0; t < q + rem; ++t) {
    double out_space = 1;
    for (int u = 0; u < q + rem; ++u) {
      if (u < t)
        out_space *= (u < q) ? dr : br;
      else if (u == t)
        out_space *= (u < q) ? dr : br;
      else
        out_space *= (u < q) ? cs : c;
    }
    total += 2.0 * out_space * ((t < q) ? cs : c);
  }
  total *= 3;                                          // three legs
  total += 3.0 * std::pow(dr, q) * std::pow(br, rem);  // contraction
  return total;
}

inline SparseVec<Rational> to_sparse(const std::vector<Rational>& dense) {
  SparseVec<Rational> out;
  for (std::uint64_t i = 0; i < dense.size(); ++i)
    if (dense[i] != 0) out.emplace(i, dense[i]);
  return out;
}

/// Dense-vector entry point matching the decomposition certificate for T:
/// vectors of length c^r, exact result, operation count checked against the
/// dense bound.
inline YatesResult<Rational> yates_evaluate(const SparseTensor& t, const Decomposition& d, int r,
                                            const std::vector<Rational>& x, const std::vector<Rational>& y,
                                            const std::vector<Rational>& z,
                                            const Decomposition* base = nullptr) {
  if (!t.is_cubic() || t.dims[0] != d.c) throw domain_error("certificate does not match tensor legs");
  double cr = std::pow(double(d.c), r);
  if (double(x.size()) != cr || double(y.size()) != cr || double(z.size()) != cr)
    throw domain_error("vector length must be c^r");
  auto res = yates_evaluate_sparse(d, base, r, to_sparse(x), to_sparse(y), to_sparse(z));
  double bound = yates_op_bound(d, base, r);
  if (std::isfinite(bound) && double(res.ops.total()) > bound)
    throw domain_error("Yates operation counter exceeded its dense bound");
  return res;
}

}  // namespace trichrome

#endif  // TRICHROME_TENSOR_HPP
