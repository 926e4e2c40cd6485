#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <sstream>

#include "trichrome/gen.hpp"
#include "trichrome/tensor.hpp"

using namespace trichrome;

namespace {

std::vector<Rational> random_vec(std::size_t len, SplitMix64& rng) {
  std::vector<Rational> v(len);
  for (auto& x : v) x = Rational(Int(rng.below(41)) - 20, Int(rng.below(6)) + 1);
  return v;
}

std::map<std::array<std::uint64_t, 3>, Rational> support_map(const SparseTensor& t) {
  std::map<std::array<std::uint64_t, 3>, Rational> m;
  for (const auto& e : t.entries) m[{e.idx[0], e.idx[1], e.idx[2]}] = e.coeff;
  return m;
}

}  // namespace

TEST_CASE("partitioning tensor monomial counts") {
  auto t3 = partitioning_tensor(Rational(1, 3), 3);
  CHECK(t3.nnz() == 6);
  CHECK(t3.dims[0] == 4);  // empty set plus three singletons
  CHECK(t3.all_coeffs_integer());
  CHECK(t3.all_coeffs_nonnegative());

  CHECK(partitioning_tensor(Rational(1, 3), 6).nnz() == 90);
  auto t1 = partitioning_tensor(Rational(1, 3), 1);
  CHECK(t1.nnz() == 3);
  CHECK(t1.dims[0] == 2);
}

TEST_CASE("block-sum tensor") {
  // nu'*b >= B: unrestricted tripartitions, 3 + 9 = 12 for B = 2
  CHECK(block_sum_tensor_cutoff(2, 2).nnz() == 12);

  auto t = block_sum_tensor_cutoff(1, 3);
  std::uint64_t by_brute = 0;
  for (int k = 1; k <= 3; ++k)
    for (const auto& tri : three_partitions_of((Mask(1) << k) - 1))
      if (popcount(tri.x1) <= 1 && popcount(tri.x2) <= 1 && popcount(tri.x3) <= 1) ++by_brute;
  CHECK(t.nnz() == by_brute);
  CHECK(by_brute == 3 + 6 + 6);

  // wrapper asserts the proof's leg-dimension bound
  auto wrapped = block_sum_tensor(Rational(2, 5), Rational(5), 5);
  CHECK(wrapped.dims[0] <= std::uint64_t(block_sum_leg_bound(Rational(2, 5), 5)));
}

TEST_CASE("matrix multiplication tensor") {
  CHECK(matrix_mult_tensor(1).nnz() == 1);
  auto m2 = matrix_mult_tensor(2);
  CHECK(m2.nnz() == 8);
  CHECK(m2.dims[0] == 4);

  // M2 (x) M2 = M4 under (i,i') -> 2(i-1)+i'
  auto prod = kronecker(m2, m2);
  auto m4 = matrix_mult_tensor(4);
  REQUIRE(prod.nnz() == m4.nnz());
  auto relabel = [](std::uint64_t idx) {
    // idx = outer*(4) + inner over 2x2 matrix pairs; map to 4x4 entry index
    std::uint64_t oa = idx / 4 / 2, ob = idx / 4 % 2, ia = idx % 4 / 2, ib = idx % 4 % 2;
    std::uint64_t a = 2 * oa + ia, b = 2 * ob + ib;
    return a * 4 + b;
  };
  auto m4sup = support_map(m4);
  for (const auto& e : prod.entries) {
    std::array<std::uint64_t, 3> key{relabel(e.idx[0]), relabel(e.idx[1]), relabel(e.idx[2])};
    REQUIRE(m4sup.count(key) == 1);
    CHECK(m4sup[key] == e.coeff);
  }
}

TEST_CASE("kronecker structure") {
  auto t = partitioning_tensor(Rational(1, 3), 3);
  SparseTensor unit;
  unit.dims = {1, 1, 1};
  unit.entries.push_back({{0, 0, 0}, Rational(1)});
  auto same = kronecker(t, unit);
  CHECK(same.nnz() == t.nnz());
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    CHECK(same.entries[i].idx == t.entries[i].idx);
    CHECK(same.entries[i].coeff == t.entries[i].coeff);
  }

  SplitMix64 rng(5);
  for (int it = 0; it < 5; ++it) {
    SparseTensor a, b;
    a.dims = {3, 3, 3};
    b.dims = {2, 2, 2};
    for (int i = 0; i < 4; ++i)
      a.entries.push_back({{rng.below(3), rng.below(3), rng.below(3)}, Rational(1)});
    for (int i = 0; i < 3; ++i)
      b.entries.push_back({{rng.below(2), rng.below(2), rng.below(2)}, Rational(1)});
    // dedupe indices to keep the 0/1 structure
    auto dedupe = [](SparseTensor& t2) {
      std::sort(t2.entries.begin(), t2.entries.end(),
                [](const auto& x, const auto& y) { return x.idx < y.idx; });
      t2.entries.erase(std::unique(t2.entries.begin(), t2.entries.end(),
                                   [](const auto& x, const auto& y) { return x.idx == y.idx; }),
                       t2.entries.end());
    };
    dedupe(a);
    dedupe(b);
    CHECK(kronecker(a, b).nnz() == a.nnz() * b.nnz());
  }

  CHECK(kronecker_power(t, 1).nnz() == 6);
  CHECK(kronecker_power(t, 2).nnz() == 36);
  CHECK_THROWS_AS(kronecker_power(partitioning_tensor(Rational(1, 3), 6), 4), resource_error);
}

TEST_CASE("index remap into the larger universe") {
  auto t = partitioning_tensor(Rational(1, 3), 3);
  auto p2 = kronecker_power(t, 2);
  auto remapped = remap_partition_indices(p2, 3, 2);
  CHECK(remapped.nnz() == 36);
  CHECK(remapped.dims[0] == 64);

  // ({1}, {2}) -> {1, 5} in [6]
  bool found = false;
  for (const auto& e : remapped.entries)
    if (e.idx[0] == ((Mask(1) << 0) | (Mask(1) << 4))) found = true;
  CHECK(found);

  // strict support containment in T_{1/3,6} over subsets of [6]
  auto t6 = partitioning_tensor(Rational(1, 3), 6);
  std::map<std::array<Mask, 3>, Rational> t6sup;
  for (const auto& e : t6.entries)
    t6sup[{t6.labels[0][e.idx[0]][0].subset, t6.labels[1][e.idx[1]][0].subset,
           t6.labels[2][e.idx[2]][0].subset}] = e.coeff;
  for (const auto& e : remapped.entries) {
    std::array<Mask, 3> key{Mask(e.idx[0]), Mask(e.idx[1]), Mask(e.idx[2])};
    REQUIRE(t6sup.count(key) == 1);
  }
  CHECK(remapped.nnz() < t6.nnz());

  auto r1 = remap_partition_indices(kronecker_power(t, 1), 3, 1);
  CHECK(r1.nnz() == t.nnz());
}

TEST_CASE("trivial decomposition and verification") {
  SparseTensor mono;
  mono.dims = {2, 2, 2};
  mono.entries.push_back({{1, 0, 1}, Rational(1)});
  CHECK(trivial_decomposition(mono, 2).rank == 1);

  auto t = partitioning_tensor(Rational(1, 3), 3);
  auto d = trivial_decomposition(t, 1);
  CHECK(d.rank == 6);
  CHECK(trivial_decomposition(matrix_mult_tensor(2), 1).rank == 8);

  std::string why;
  CHECK(verify_decomposition(d, t, &why));

  auto corrupted = d;
  corrupted.rows[1][2].clear();
  corrupted.rows[1][2].emplace_back(0, Rational(7));
  CHECK_FALSE(verify_decomposition(corrupted, t, &why));
  CHECK(!why.empty());

  auto d2 = trivial_decomposition(t, 2);
  CHECK(d2.rank == 36);
  CHECK(verify_decomposition(d2, t, &why));
}

TEST_CASE("decomposition file round-trip and strict parsing") {
  auto t = matrix_mult_tensor(2);
  auto d = trivial_decomposition(t, 1);
  std::ostringstream out;
  write_decomposition(out, d);
  std::istringstream in(out.str());
  auto back = parse_decomposition(in);
  CHECK(back.c == d.c);
  CHECK(back.s == d.s);
  CHECK(back.rank == d.rank);
  std::string why;
  CHECK(verify_decomposition(back, t, &why));

  auto reject = [](const std::string& text, const std::string& needle) {
    std::istringstream is(text);
    try {
      parse_decomposition(is);
      FAIL("expected parse_error");
    } catch (const parse_error& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  reject("tensor-decomp v2\n", "line 1");
  reject("tensor-decomp v1\nc 2\ns 1\nd 1\nB\n", "line 5");
  reject("tensor-decomp v1\nc 2\ns 1\nd 1\nA\n1\n", "line 6");  // wrong width
}

TEST_CASE("direct evaluation") {
  auto t = partitioning_tensor(Rational(1, 3), 3);
  std::vector<Rational> zero(4, Rational(0));
  CHECK(direct_evaluate(t, zero, zero, zero) == 0);

  // indicator of the three singleton legs
  std::vector<Rational> ind(4, Rational(1));
  ind[0] = 0;  // empty-set leg
  CHECK(direct_evaluate(t, ind, ind, ind) == 6);

  // M2 on vectorized matrices equals trace(XYZ)
  auto m2 = matrix_mult_tensor(2);
  SplitMix64 rng(9);
  for (int it = 0; it < 5; ++it) {
    auto x = random_vec(4, rng), y = random_vec(4, rng), z = random_vec(4, rng);
    auto at = [](const std::vector<Rational>& m, int a, int b) { return m[a * 2 + b]; };
    Rational trace(0);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) trace += at(x, i, j) * at(y, j, k) * at(z, k, i);
    CHECK(direct_evaluate(m2, x, y, z) == trace);
  }
}

TEST_CASE("yates evaluation equals direct evaluation") {
  SplitMix64 rng(13);
  auto check_pair = [&](const SparseTensor& t, int r, int vectors) {
    auto d = trivial_decomposition(t, 1);
    auto power = kronecker_power(t, r);
    std::size_t len = 1;
    for (int i = 0; i < r; ++i) len *= t.dims[0];
    for (int it = 0; it < vectors; ++it) {
      auto x = random_vec(len, rng), y = random_vec(len, rng), z = random_vec(len, rng);
      auto res = yates_evaluate(t, d, r, x, y, z);
      CHECK(res.value == direct_evaluate(power, x, y, z));
    }
  };
  check_pair(partitioning_tensor(Rational(1, 3), 3), 1, 5);
  check_pair(partitioning_tensor(Rational(1, 3), 3), 2, 5);
  check_pair(partitioning_tensor(Rational(1, 3), 3), 3, 3);
  check_pair(matrix_mult_tensor(2), 2, 5);
  check_pair(block_sum_tensor_cutoff(1, 2), 2, 5);

  // all-ones over the 16 pair indices counts the monomials
  auto t = partitioning_tensor(Rational(1, 3), 3);
  auto d = trivial_decomposition(t, 1);
  std::vector<Rational> ones(16, Rational(1));
  CHECK(yates_evaluate(t, d, 2, ones, ones, ones).value == 36);

  // zero input short-circuits to zero
  std::vector<Rational> zero(16, Rational(0));
  CHECK(yates_evaluate(t, d, 2, zero, ones, ones).value == 0);
}

TEST_CASE("yates mixed-power remainder path") {
  auto t = partitioning_tensor(Rational(1, 3), 3);
  auto d2 = trivial_decomposition(t, 2);
  auto base = trivial_decomposition(t, 1);
  auto power3 = kronecker_power(t, 3);
  SplitMix64 rng(17);
  for (int it = 0; it < 5; ++it) {
    auto x = random_vec(64, rng), y = random_vec(64, rng), z = random_vec(64, rng);
    auto res = yates_evaluate(t, d2, 3, x, y, z, &base);
    CHECK(res.value == direct_evaluate(power3, x, y, z));
  }
  std::vector<Rational> v(64, Rational(1));
  CHECK_THROWS_AS(yates_evaluate(t, d2, 3, v, v, v), domain_error);  // base missing
}

TEST_CASE("trivial rank is multiplicative under kronecker") {
  auto a = partitioning_tensor(Rational(1, 3), 3);
  auto b = matrix_mult_tensor(2);
  CHECK(trivial_decomposition(kronecker(a, b), 1).rank ==
        trivial_decomposition(a, 1).rank * trivial_decomposition(b, 1).rank);
}
