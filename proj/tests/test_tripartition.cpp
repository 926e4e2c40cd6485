#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "trichrome/gen.hpp"
#include "trichrome/tripartition.hpp"

using namespace trichrome;

namespace {

SetFamily fam(int n, std::vector<Mask> members) {
  SetFamily f;
  f.universe = Universe(n);
  f.members = std::move(members);
  return f;
}

SetFamily all_k_subsets(int n, int k) {
  SetFamily f;
  f.universe = Universe(n);
  for (Mask m = 0; m < (Mask(1) << n); ++m)
    if (popcount(m) == k) f.members.push_back(m);
  return f;
}

}  // namespace

TEST_CASE("brute tripartition oracle") {
  auto pairs6 = all_k_subsets(6, 2);
  auto w = brute_tripartition(pairs6, pairs6, pairs6);
  REQUIRE(w.has_value());
  CHECK((w->x1 | w->x2 | w->x3) == Universe(6).full_mask());
  CHECK((w->x1 & w->x2) == 0);
  CHECK(popcount(w->x1) == 2);

  CHECK_FALSE(brute_tripartition(fam(6, {0b000111}), fam(6, {0b001001}), pairs6).has_value());

  auto singles = fam(3, {0b001, 0b010, 0b100});
  CHECK(brute_tripartition(singles, singles, singles).has_value());
}

TEST_CASE("block-balance filter") {
  auto f = all_k_subsets(8, 4);
  CHECK(filter_block_balanced(f, {}, Rational(1, 10), 2).members == f.members);
  CHECK(filter_block_balanced(f, {0b00001111}, Rational(1), 2).members == f.members);

  auto even = filter_block_balanced(f, {0b00001111, 0b11110000}, Rational(0), 2);
  for (Mask m : even.members) CHECK(popcount(m & 0b1111) == 2);
  CHECK(!even.members.empty());
  CHECK(even.members.size() < f.members.size());
}

TEST_CASE("pairwise hash family") {
  HashFamily h = pairwise_hash_family(5, 5);
  CHECK(h.p == 5);
  // exact pairwise independence when r = p
  for (int x = 1; x <= 5; ++x)
    for (int x2 = 1; x2 <= 5; ++x2) {
      if (x == x2) continue;
      std::map<std::pair<int, int>, int> hits;
      for (int a = 0; a < h.p; ++a)
        for (int b = 0; b < h.p; ++b) ++hits[{h.eval(a, b, x), h.eval(a, b, x2)}];
      for (int j = 0; j < 5; ++j)
        for (int j2 = 0; j2 < 5; ++j2) CHECK(hits[{j, j2}] == 1);
    }

  HashFamily flat = pairwise_hash_family(6, 1);
  for (int a = 0; a < flat.p; ++a) CHECK(flat.preimage(a, 2, 0) == Universe(6).full_mask());

  CHECK(pairwise_hash_family(12, 3).size() == 169);
  CHECK_THROWS_AS(pairwise_hash_family(3, 5), domain_error);
}

TEST_CASE("hash family Chebyshev certificate") {
  // Second-moment bound with measured moments: for |A| >= kappa*n and any
  // fixed range point j, the fraction of members with A not balanced onto
  // h^-1(j) is at most 1/(delta^2 kappa^2 b) plus a slack term computed from
  // the family's measured deviation from exact pairwise independence
  // (eps1 on singles, eps2 on pairs); the slack vanishes when r = p.
  auto check_family = [](int n, int r, const Rational& delta, const Rational& kappa) {
    HashFamily h = pairwise_hash_family(n, r);
    const int members = h.p * h.p;
    Rational eps1(0), eps2(0);
    for (int x = 1; x <= n; ++x)
      for (int j = 0; j < r; ++j) {
        int hits = 0;
        for (int a = 0; a < h.p; ++a)
          for (int b = 0; b < h.p; ++b)
            if (h.eval(a, b, x) == j) ++hits;
        eps1 = std::max(eps1, Rational(abs(Rational(hits, members) - Rational(1, r))));
      }
    for (int x = 1; x <= n; ++x)
      for (int x2 = x + 1; x2 <= n; ++x2)
        for (int j = 0; j < r; ++j)
          for (int j2 = 0; j2 < r; ++j2) {
            int hits = 0;
            for (int a = 0; a < h.p; ++a)
              for (int b = 0; b < h.p; ++b)
                if (h.eval(a, b, x) == j && h.eval(a, b, x2) == j2) ++hits;
            eps2 = std::max(eps2, Rational(abs(Rational(hits, members) - Rational(1, r * r))));
          }
    if (r == h.p) {
      CHECK(eps1 == 0);
      CHECK(eps2 == 0);
    }
    Rational b = Rational(n) / r;
    SplitMix64 rng(55);
    for (int it = 0; it < 6; ++it) {
      Mask a_set = rng.below(Mask(1) << n);
      Rational sz(popcount(a_set));
      if (sz < kappa * n || sz == 0) continue;
      Rational mu = sz / r;
      // E[(X - mu)^2] <= mu + |A|*eps1*(1 + 2*mu) + |A|^2*eps2, so the failure
      // fraction is at most that over (delta*mu)^2.
      Rational slack = (sz * eps1 * (1 + 2 * mu) + sz * sz * eps2) / (delta * delta * mu * mu);
      Rational bound = 1 / (delta * delta * kappa * kappa * b) + slack;
      for (int j = 0; j < r; ++j) {
        int bad = 0;
        for (int ha = 0; ha < h.p; ++ha)
          for (int hb = 0; hb < h.p; ++hb)
            if (!is_balanced_onto(a_set, h.preimage(ha, hb, j), delta, r)) ++bad;
        CHECK(Rational(bad, members) <= bound);
      }
    }
  };
  check_family(11, 11, Rational(1), Rational(1, 2));  // exact: r = p
  check_family(12, 3, Rational(1, 2), Rational(1, 2));
  check_family(14, 5, Rational(1, 2), Rational(2, 5));
}

TEST_CASE("block-balanced solver against the oracle") {
  TripartitionContext ctx;

  CHECK_FALSE(solve_block_balanced(fam(4, {}), fam(4, {}), fam(4, {}),
                                   BlockPartition(Universe(4), 0, {0b1111}),
                                   BalanceParams{Rational(1, 4), 1, Rational(1, 3)}, ctx.blocks));

  // n=6, two halves, delta=1/4: the filter keeps exactly the 1-1 split pairs
  // and the solver must agree with brute force on them.
  {
    std::vector<Mask> blocks = {0b000111, 0b111000};
    BlockPartition bp(Universe(6), 0, blocks);
    BalanceParams params{Rational(1, 4), 2, Rational(1, 3)};
    auto raw = all_k_subsets(6, 2);
    auto f = filter_block_balanced(raw, blocks, params.delta, params.r);
    CHECK(f.members.size() == 9);  // one element in each half
    CHECK(solve_block_balanced(raw, raw, raw, bp, params, ctx.blocks));
    CHECK(solve_block_balanced(f, f, f, bp, params, ctx.blocks) ==
          brute_tripartition(f, f, f).has_value());
  }

  // delta=1 with three 2-blocks: pairs inside one block exceed the
  // (1+delta)|A|/3 = 4/3 cap, so exactly the 12 cross-block pairs survive;
  // solved via the core (the wrapper's nu' < 1/2 precondition excludes delta=1)
  {
    std::vector<Mask> blocks = {0b000011, 0b001100, 0b110000};
    auto f = filter_block_balanced(all_k_subsets(6, 2), blocks, Rational(1), 3);
    CHECK(f.members.size() == 12);
    CHECK(solve_block_balanced_masks(f.members, f.members, f.members, blocks, ctx.blocks));
    CHECK(solve_block_balanced_masks(f.members, f.members, f.members, blocks, ctx.blocks) ==
          brute_tripartition(f, f, f).has_value());
  }

  // random sweeps across block structures and universe sizes (core solver,
  // which is exact for arbitrary blocks and families)
  SplitMix64 rng(101);
  int yes = 0, no = 0;
  for (int it = 0; it < 200; ++it) {
    int n = 3 + static_cast<int>(rng.below(7));
    int nblocks = 1 + static_cast<int>(rng.below(3));
    std::vector<Mask> bl(nblocks, 0);
    for (int v = 0; v < n; ++v) bl[rng.below(nblocks)] |= Mask(1) << v;
    int count = 8 + static_cast<int>(rng.below(20));
    SetFamily g1 = random_nu_bounded_family(n, Rational(1, 2), count, rng);
    SetFamily g2 = random_nu_bounded_family(n, Rational(1, 2), count, rng);
    SetFamily g3 = random_nu_bounded_family(n, Rational(1, 2), count, rng);
    bool expect = brute_tripartition(g1, g2, g3).has_value();
    bool got = solve_block_balanced_masks(g1.members, g2.members, g3.members, bl, ctx.blocks);
    CHECK(got == expect);
    (expect ? yes : no) += 1;
  }
  CHECK(yes > 10);  // the sweep must exercise both answers
  CHECK(no > 10);
}

TEST_CASE("balancing family construction") {
  // delta = 1: nothing is dropped by the structural bounds
  auto loose = build_balancing_family(9, Rational(1), Rational(2, 5), Rational(3), true);
  CHECK(loose.dropped == 0);
  CHECK(!loose.partitions.empty());
  for (const auto& bp : loose.partitions) {
    Mask all = bp.fault_block;
    for (Mask b : bp.blocks) all |= b;
    CHECK(all == Universe(9).full_mask());
  }

  // size is bounded by the construction loop count p^2 * sum_q C(r, q)
  auto fam12 = build_balancing_family(12, Rational(1, 2), Rational(5, 12), Rational(2), true);
  CHECK(fam12.r == 3);
  std::size_t loop_bound = std::size_t(fam12.p) * fam12.p * (1 + 3);  // q in {0}, C(3,1)=3 at q=1
  CHECK(fam12.partitions.size() + fam12.dropped <= loop_bound * 2);
  CHECK(fam12.partitions.size() == 456);

  // the asymptotic size condition is enforced without force_small
  CHECK_THROWS_AS(build_balancing_family(12, Rational(1, 2), Rational(5, 12), Rational(2), false),
                  domain_error);
}

TEST_CASE("covering property at n = 9") {
  auto fam9 = build_balancing_family(9, Rational(2, 3), Rational(2, 5), Rational(2), true);
  CHECK_FALSE(verify_balancing_family(fam9, 9).has_value());
}

TEST_CASE("full reduction equals the oracle") {
  TripartitionContext ctx;
  TripartitionOptions opts;

  // nu-boundedness precondition
  auto full = fam(6, {Universe(6).full_mask()});
  CHECK_THROWS_AS(solve_tripartition(full, full, full, Rational(5, 12), Rational(1, 100), ctx, opts),
                  domain_error);

  // planted witness at n = 12, sizes (5, 4, 3)
  SplitMix64 rng(7);
  for (int it = 0; it < 5; ++it) {
    auto p = planted_tripartition(12, Rational(5, 12), 8, rng);
    TripartitionStats stats;
    CHECK(solve_tripartition(p.f1, p.f2, p.f3, Rational(5, 12), Rational(1, 100), ctx, opts,
                             &stats));
    CHECK(stats.exact);
  }

  // oracle sweep across nu values, including planted-yes and sparse-no draws
  int yes = 0, no = 0;
  for (const Rational& nu : {Rational(1, 3), Rational(2, 5), Rational(9, 20)}) {
    for (int it = 0; it < 40; ++it) {
      int n = 3 + static_cast<int>(rng.below(10));
      SetFamily f1, f2, f3;
      if (it % 3 == 0) {
        if (3 * to_int64(floor_rational(nu * n)) < n)
          continue;  // tiny n cannot fit three nu-bounded integer parts
        auto p = planted_tripartition(n, nu, static_cast<int>(rng.below(8)), rng);
        f1 = p.f1;
        f2 = p.f2;
        f3 = p.f3;
      } else {
        int count = 2 + static_cast<int>(rng.below(10));
        f1 = random_nu_bounded_family(n, nu, count, rng);
        f2 = random_nu_bounded_family(n, nu, count, rng);
        f3 = random_nu_bounded_family(n, nu, count, rng);
      }
      bool expect = brute_tripartition(f1, f2, f3).has_value();
      TripartitionStats stats;
      bool got = solve_tripartition(f1, f2, f3, nu, Rational(1, 100), ctx, opts, &stats);
      CHECK(got == expect);
      CHECK(stats.block_solver_calls <= stats.family_size * 3ull * 3 * 3 * 3 + 1);
      (expect ? yes : no) += 1;
    }
  }
  CHECK(yes > 15);
  CHECK(no > 15);
}
