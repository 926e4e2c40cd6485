// End-to-end acceptance checks; prints one PASS/FAIL line per criterion and
// exits nonzero if any fail.
#include <array>
#include <chrono>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "trichrome/chromatic.hpp"
#include "trichrome/exponents.hpp"
#include "trichrome/gen.hpp"
#include "trichrome/lattice.hpp"
#include "trichrome/setcover.hpp"
#include "trichrome/tensor.hpp"
#include "trichrome/tripartition.hpp"

using namespace trichrome;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& note = "") {
  std::printf("criterion %d: %s — %s%s%s\n", id, pass ? "PASS" : "FAIL", what.c_str(),
              note.empty() ? "" : ": ", note.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Rational> random_vector(std::uint64_t dim, SplitMix64& rng) {
  std::vector<Rational> x(dim);
  for (auto& v : x)
    v = Rational(Int(rng.below(19)) - 9, Int(rng.below(4)) + 1);
  return x;
}

// --- criterion 1: exponent arithmetic ---------------------------------------

void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  std::string note;
  bool ok = true;
  try {
    auto r = exponent_report(Rational(1, 145), Rational(0), parse_decimal_rational("1.3289"),
                             parse_decimal_rational("1.7215"));
    ok = r.tb <= 1.9998 && r.td <= 1.98 && r.tc <= 1.99981 && r.te <= 1.99981 &&
         r.max_base <= 1.99982 && r.certified_error <= 1e-5;
    char buf[160];
    std::snprintf(buf, sizeof buf, "tb=%.6f tc=%.6f td=%.6f te=%.6f max=%.6f err=%.2g", r.tb,
                  r.tc, r.td, r.te, r.max_base, r.certified_error);
    note = buf;
  } catch (const std::exception& e) {
    ok = false;
    note = e.what();
  }
  double s = seconds_since(t0);
  if (s >= 1.0) {
    ok = false;
    note += " (too slow)";
  }
  report(1, ok, "exponent bases at delta=1/145 within the published bounds", note);
}

// --- criterion 2: chromatic oracle equivalence -------------------------------

void criterion_2() {
  auto t0 = std::chrono::steady_clock::now();
  std::string note;
  bool ok = true;
  long checked = 0;
  TripartitionContext ctx;
  try {
    auto check = [&](const Graph& g) {
      int expect = chromatic_brute(g);
      for (const Rational& d : {Rational(1), Rational(g.n, 20), Rational(g.n, 10)}) {
        PipelineConfig cfg;
        cfg.d = d;
        if (chromatic_number(g, cfg, &ctx) != expect) {
          ok = false;
          if (note.empty())
            note = "mismatch on n=" + std::to_string(g.n) + " d=" + rational_to_string(d);
        }
        ++checked;
      }
    };
    for (int n = 1; n <= 7 && ok; ++n)
      for (const Graph& g : graph_catalog(n)) check(g);
    SplitMix64 rng(2026);
    for (int it = 0; it < 500 && ok; ++it) {
      int n = 8 + static_cast<int>(rng.below(5));
      check(random_graph(n, 50 + static_cast<int>(rng.below(900)), rng));
    }
  } catch (const std::exception& e) {
    ok = false;
    note = e.what();
  }
  double s = seconds_since(t0);
  if (s >= 600) {
    ok = false;
    note += " (over the 10 min budget)";
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%ld verdicts in %.0fs", checked, s);
  report(2, ok, "pipeline chromatic number equals the brute oracle",
         note.empty() ? buf : note);
}

// --- criterion 3: tripartition oracle equivalence ----------------------------

void criterion_3() {
  std::string note;
  bool ok = true;
  long yes = 0, no = 0;
  TripartitionContext ctx;
  try {
    SplitMix64 rng(404);
    for (const Rational& nu : {Rational(1, 3), Rational(2, 5), Rational(9, 20)}) {
      for (int it = 0; it < 200 && ok; ++it) {
        SetFamily f1, f2, f3;
        if (it % 3 == 0) {
          int n;
          do {
            n = 6 + static_cast<int>(rng.below(7));
          } while (3 * to_int64(floor_rational(nu * n)) < n);
          auto planted = planted_tripartition(n, nu, 2 + static_cast<int>(rng.below(6)), rng);
          f1 = planted.f1;
          f2 = planted.f2;
          f3 = planted.f3;
        } else {
          int n = 5 + static_cast<int>(rng.below(8));
          f1 = random_nu_bounded_family(n, nu, 2 + static_cast<int>(rng.below(10)), rng);
          f2 = random_nu_bounded_family(n, nu, 2 + static_cast<int>(rng.below(10)), rng);
          f3 = random_nu_bounded_family(n, nu, 2 + static_cast<int>(rng.below(10)), rng);
        }
        bool expect = brute_tripartition(f1, f2, f3).has_value();
        bool got = solve_tripartition(f1, f2, f3, nu, Rational(1, 2), ctx);
        if (got != expect) {
          ok = false;
          note = "mismatch at nu=" + rational_to_string(nu) + " n=" +
                 std::to_string(f1.universe.n);
        }
        (expect ? yes : no) += 1;
      }
    }
    if (yes == 0 || no == 0) {
      ok = false;
      note = "instance mix degenerate";
    }
  } catch (const std::exception& e) {
    ok = false;
    note = e.what();
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%ld yes / %ld no instances", yes, no);
  report(3, ok, "tripartition solver equals the brute oracle", note.empty() ? buf : note);
}

// --- criterion 4: rank-decomposition evaluation ------------------------------

void criterion_4() {
  std::string note;
  bool ok = true;
  long checks = 0;
  try {
    SplitMix64 rng(55);
    auto sweep = [&](const SparseTensor& t, int rmax) {
      auto d = trivial_decomposition(t, 1);
      for (int r = 1; r <= rmax && ok; ++r) {
        auto power = kronecker_power(t, r);
        for (int it = 0; it < 50 && ok; ++it) {
          auto x = random_vector(power.dims[0], rng);
          auto y = random_vector(power.dims[1], rng);
          auto z = random_vector(power.dims[2], rng);
          if (yates_evaluate(t, d, r, x, y, z).value != direct_evaluate(power, x, y, z)) {
            ok = false;
            note = "divergence at r=" + std::to_string(r);
          }
          ++checks;
        }
      }
    };
    sweep(partitioning_tensor(Rational(1, 3), 3), 3);
    sweep(matrix_mult_tensor(2), 3);
    sweep(block_sum_tensor_cutoff(1, 2), 3);
    sweep(block_sum_tensor_cutoff(2, 2), 2);
  } catch (const std::exception& e) {
    ok = false;
    note = e.what();
  }
  report(4, ok, "recursive evaluation equals direct evaluation of the power",
         note.empty() ? std::to_string(checks) + " exact comparisons" : note);
}

// --- criterion 5: transform inversion and t-cover counts ---------------------

void criterion_5() {
  std::string note;
  bool ok = true;
  try {
    SplitMix64 rng(606);
    auto u5 = SubsetClosedFamily::all_subsets_up_to(Universe(5), 5);
    for (int it = 0; it < 10 && ok; ++it) {
      auto f = LatticeVector<Rational>::zero(u5);
      for (auto& v : f.values) v = Rational(Int(rng.below(41)) - 20, Int(rng.below(6)) + 1);
      if (down_transform(down_transform(f, Rational(1)), Rational(-1)).values != f.values ||
          up_transform(up_transform(f, Rational(1)), Rational(-1)).values != f.values) {
        ok = false;
        note = "round trip broke on 2^[5]";
      }
    }
    auto u4 = SubsetClosedFamily::all_subsets_up_to(Universe(4), 4);
    for (int it = 0; it < 20 && ok; ++it) {
      SetFamily f;
      f.universe = Universe(4);
      int count = 1 + static_cast<int>(rng.below(5));
      for (int i = 0; i < count; ++i) f.members.push_back(rng.below(16));
      std::vector<Mask> fdown;
      for (Mask m = 0; m < 16; ++m)
        for (Mask g : f.members)
          if ((m & ~g) == 0) {
            fdown.push_back(m);
            break;
          }
      for (int t = 1; t <= 3 && ok; ++t) {
        std::map<Mask, Int> tuples;
        std::vector<std::size_t> pick(t, 0);
        for (;;) {
          Mask un = 0;
          for (std::size_t p : pick) un |= fdown[p];
          tuples[un] += 1;
          int pos = t - 1;
          while (pos >= 0 && ++pick[pos] == fdown.size()) pick[pos--] = 0;
          if (pos < 0) break;
        }
        auto h = count_t_covers<Int>(f, u4, t);
        for (std::size_t i = 0; i < u4.size(); ++i)
          if (h.values[i] != tuples[u4.masks()[i]]) {
            ok = false;
            note = "cover count diverged at t=" + std::to_string(t);
          }
      }
    }
  } catch (const std::exception& e) {
    ok = false;
    note = e.what();
  }
  report(5, ok, "transform round trips and t-cover counts match enumeration", note);
}

// --- criterion 6: combinatorial identities -----------------------------------

void criterion_6() {
  std::string note;
  bool ok = true;
  try {
    auto t3 = partitioning_tensor(Rational(1, 3), 3);
    auto t6 = partitioning_tensor(Rational(1, 3), 6);
    if (t3.nnz() != 6 || t6.nnz() != 90) {
      ok = false;
      note = "monomial counts off";
    }

    auto remapped = remap_partition_indices(kronecker_power(t3, 2), 3, 2);
    std::set<std::array<Mask, 3>> t6sup;
    for (const auto& e : t6.entries)
      t6sup.insert({t6.labels[0][e.idx[0]][0].subset, t6.labels[1][e.idx[1]][0].subset,
                    t6.labels[2][e.idx[2]][0].subset});
    if (remapped.nnz() != 36 || !(remapped.nnz() < t6.nnz())) ok = false;
    for (const auto& e : remapped.entries)
      if (!t6sup.count({Mask(e.idx[0]), Mask(e.idx[1]), Mask(e.idx[2])})) {
        ok = false;
        note = "remapped support escapes the larger tensor";
      }

    auto m2 = matrix_mult_tensor(2);
    auto prod = kronecker(m2, m2);
    auto m4 = matrix_mult_tensor(4);
    if (prod.nnz() != m4.nnz()) ok = false;
    auto relabel = [](std::uint64_t idx) {
      std::uint64_t oa = idx / 4 / 2, ob = idx / 4 % 2, ia = idx % 4 / 2, ib = idx % 4 % 2;
      return (2 * oa + ia) * 4 + (2 * ob + ib);
    };
    std::map<std::array<std::uint64_t, 3>, Rational> m4sup;
    for (const auto& e : m4.entries) m4sup[{e.idx[0], e.idx[1], e.idx[2]}] = e.coeff;
    for (const auto& e : prod.entries) {
      std::array<std::uint64_t, 3> key{relabel(e.idx[0]), relabel(e.idx[1]), relabel(e.idx[2])};
      auto it = m4sup.find(key);
      if (it == m4sup.end() || it->second != e.coeff) {
        ok = false;
        note = "matrix tensor product mismatch";
      }
    }
  } catch (const std::exception& e) {
    ok = false;
    note = e.what();
  }
  report(6, ok, "6 and 90 monomials, 36-entry strict containment, product identity", note);
}

// --- criterion 7: MIS count bound ---------------------------------------------

void criterion_7() {
  std::string note;
  bool ok = true;
  long graphs = 0;
  try {
    for (int n = 1; n <= 9 && ok; ++n)
      for (const Graph& g : graph_catalog(n)) {
        std::size_t count = maximal_independent_sets(g).size();
        if (count > (std::size_t(1) << (n - alpha(g)))) {
          ok = false;
          note = "bound violated at n=" + std::to_string(n);
          break;
        }
        ++graphs;
      }
    Graph tt(6);
    tt.add_edge(1, 2);
    tt.add_edge(2, 3);
    tt.add_edge(1, 3);
    tt.add_edge(4, 5);
    tt.add_edge(5, 6);
    tt.add_edge(4, 6);
    if (maximal_independent_sets(tt).size() != 9) {
      ok = false;
      note = "two disjoint triangles should give exactly 9";
    }
  } catch (const std::exception& e) {
    ok = false;
    note = e.what();
  }
  report(7, ok, "maximal-independent-set count within 2^(n-alpha) on the n<=9 catalog",
         note.empty() ? std::to_string(graphs) + " graphs" : note);
}

// --- criterion 8: balancing-family covering property --------------------------

void criterion_8() {
  std::string note;
  bool ok = true;
  try {
    auto fam = build_balancing_family(12, Rational(1, 2), Rational(5, 12), Rational(2), true);
    auto violator = verify_balancing_family(fam, 12);
    if (violator) {
      ok = false;
      char buf[96];
      std::snprintf(buf, sizeof buf, "violating tripartition masks %llx/%llx/%llx",
                    (unsigned long long)violator->x1, (unsigned long long)violator->x2,
                    (unsigned long long)violator->x3);
      note = buf;
    } else {
      note = "family size " + std::to_string(fam.partitions.size()) + ", r=" +
             std::to_string(fam.r);
    }
  } catch (const std::exception& e) {
    ok = false;
    note = e.what();
  }
  report(8, ok, "every nu-bounded tripartition of [12] is balanced by some member", note);
}

// --- criterion 9: case coverage ------------------------------------------------

void criterion_9() {
  std::string note;
  bool ok = true;
  long profiles = 0;
  try {
    std::vector<int> sizes;
    for (int n = 1; n <= 40 && ok; ++n) {
      std::vector<Rational> grid;
      for (int j = 1; j <= 40; ++j) grid.emplace_back(Rational(j * n, 80));
      auto rec = [&](auto&& self, int left, int cap, int parts) -> void {
        if (!ok) return;
        if (left == 0) {
          SizeProfile p(sizes);
          ++profiles;
          for (const Rational& d : grid)
            if (classify_profile(p, d).empty()) {
              ok = false;
              note = "empty classification at n=" + std::to_string(n) + " d=" +
                     rational_to_string(d);
              return;
            }
          return;
        }
        if (parts == 8) return;
        for (int s = std::min(cap, left); s >= 1; --s) {
          sizes.push_back(s);
          self(self, left - s, s, parts + 1);
          sizes.pop_back();
        }
      };
      rec(rec, n, n, 0);
    }
  } catch (const std::exception& e) {
    ok = false;
    note = e.what();
  }
  report(9, ok, "profile classification never empty for k<=8, n<=40, 40-point slack grid",
         note.empty() ? std::to_string(profiles) + " profiles" : note);
}

// --- criterion 10: greedy bounds -----------------------------------------------

void criterion_10() {
  std::string note;
  bool ok = true;
  try {
    SplitMix64 rng(808);
    int done = 0;
    while (done < 10000 && ok) {
      int n = 12 + static_cast<int>(rng.below(38));
      Rational d(1 + static_cast<int>(rng.below(n)), 12);
      int k = 3 + static_cast<int>(rng.below(10));
      std::vector<int> sizes;
      int left = n;
      for (int i = 0; i < k - 1; ++i) {
        int cap = std::min(left - (k - 1 - i), sizes.empty() ? left : sizes.back());
        if (cap < 1) break;
        int s = 1 + static_cast<int>(rng.below(cap));
        sizes.push_back(s);
        left -= s;
      }
      if (static_cast<int>(sizes.size()) != k - 1 || left < 1 || left > sizes.back()) continue;
      sizes.push_back(left);
      SizeProfile p(sizes);
      Rational s1(p.sizes[0]);
      Rational sum4(p.sizes[0] + p.size_or_zero(1) + p.size_or_zero(2) + p.size_or_zero(3));
      if (!(s1 <= Rational(n) / 2 - d && sum4 <= Rational(n) - 6 * d)) continue;
      auto parts = greedy_three_partition(p, d);
      for (const auto& part : parts) {
        Rational sum(0);
        for (int j : part) sum += p.sizes[j];
        if (sum > Rational(n) / 2 - d) {
          ok = false;
          note = "profile split over the bound at n=" + std::to_string(n);
        }
      }
      ++done;
    }

    int lists = 0;
    while (lists < 10000 && ok) {
      Rational delta(1 + static_cast<int>(rng.below(24)), 100);
      std::vector<Rational> a;
      Rational left(1);
      while (left > 0) {
        Rational next(1 + static_cast<int>(rng.below(100)), 500);
        if (next > delta) next = delta;
        if (next > left) next = left;
        a.push_back(next);
        left -= next;
      }
      auto parts = greedy_real_partition(a, delta);
      Rational bound = Rational(1, 2) - (Rational(1, 2) - 2 * delta) / 3;
      for (const auto& part : parts) {
        Rational sum(0);
        for (int i : part) sum += a[i];
        if (sum > bound) {
          ok = false;
          note = "real split over the bound at delta=" + rational_to_string(delta);
        }
      }
      ++lists;
    }
  } catch (const std::exception& e) {
    ok = false;
    note = e.what();
  }
  report(10, ok, "greedy profile and real splits respect their bounds on 10^4 inputs each", note);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  return failures == 0 ? 0 : 1;
}
