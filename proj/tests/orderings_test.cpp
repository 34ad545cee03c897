#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "parq/error.hpp"
#include "parq/orderings.hpp"

namespace parq {
namespace {

using Vec = std::vector<double>;

// Multiples of 1/8 keep all sums exact.
Vec dyadic(std::mt19937_64& rng, std::size_t n, int lo, int hi) {
  Vec v(n);
  for (double& x : v) x = static_cast<double>(lo + static_cast<int>(rng() % (hi - lo + 1))) / 8.0;
  return v;
}

SortedProfile dyadic_profile(std::mt19937_64& rng, std::size_t n) {
  return sort_ascending(dyadic(rng, n, 0, 40));
}

TEST(Prec, Examples) {
  EXPECT_TRUE(prec(SortedProfile({0, 1}), SortedProfile({0, 1})));
  const auto v = prec(SortedProfile({0, 2}), SortedProfile({1, 1}));
  ASSERT_FALSE(v);
  EXPECT_EQ(v.violation->index, 2u);
  EXPECT_EQ(v.violation->lhs, 2.0);
  EXPECT_EQ(v.violation->rhs, 1.0);
  EXPECT_TRUE(prec(SortedProfile({1, 2, 2}), SortedProfile({1, 2, 3})));
}

TEST(Prec, ToleranceIsOneSided) {
  EXPECT_TRUE(prec(SortedProfile({1.0 + 1e-10}), SortedProfile({1.0}), 1e-9));
  EXPECT_FALSE(prec(SortedProfile({1.0 + 1e-8}), SortedProfile({1.0}), 1e-9));
}

TEST(Prec, LengthMismatch) {
  EXPECT_THROW(prec(SortedProfile({0}), SortedProfile({0, 0})), DomainError);
  EXPECT_THROW(prec_star(SortedProfile({0}), SortedProfile({0, 0})), DomainError);
  EXPECT_THROW(prec_p(SortedProfile({0}), SortedProfile({0, 0}), 1), DomainError);
  EXPECT_THROW(schur_convex_leq(Vec{0}, Vec{0, 0}), DomainError);
}

TEST(PrecStar, Examples) {
  EXPECT_TRUE(prec_star(SortedProfile({0, 1}), SortedProfile({1, 1})));
  const auto v = prec_star(SortedProfile({0, 3}), SortedProfile({1, 1}));
  ASSERT_FALSE(v);
  EXPECT_EQ(v.violation->index, 1u);  // k = 1 already fails: 3 > 2
  const auto only_k2 = prec_star(SortedProfile({0, 3}), SortedProfile({2, 2}));
  ASSERT_FALSE(only_k2);
  EXPECT_EQ(only_k2.violation->index, 2u);
  EXPECT_EQ(only_k2.violation->lhs, 3.0);
  EXPECT_EQ(only_k2.violation->rhs, 2.0);
  EXPECT_TRUE(prec_star(SortedProfile({0.5, 2}), SortedProfile({0.5, 2})));
}

TEST(PrecP, Examples) {
  const SortedProfile u({0, 2, 2});
  const SortedProfile v({1, 1, 3});
  EXPECT_TRUE(prec_p(u, v, 3));
  const auto fails = prec_p(u, v, 2);
  ASSERT_FALSE(fails);
  EXPECT_EQ(fails.violation->clause, "coord");
  EXPECT_EQ(fails.violation->index, 2u);
  EXPECT_THROW(prec_p(u, v, 0), DomainError);
  EXPECT_THROW(prec_p(u, v, 4), DomainError);
}

TEST(SchurConvex, Examples) {
  EXPECT_TRUE(schur_convex_leq(Vec{1, 1}, Vec{0, 2}));
  const auto v = schur_convex_leq(Vec{0, 2}, Vec{1, 1});
  ASSERT_FALSE(v);
  EXPECT_EQ(v.violation->index, 2u);
  EXPECT_TRUE(schur_convex_leq(Vec{3, -1, 2}, Vec{3, -1, 2}));
  EXPECT_FALSE(schur_convex_leq(Vec{1, 1}, Vec{1, 2}));
  // Permutation invariant.
  EXPECT_TRUE(schur_convex_leq(Vec{2, 0, 1}, Vec{0, 1, 2}));
}

TEST(Lemmas, NegationExamples) {
  EXPECT_TRUE(check_lemma_negation(Vec{1, 1}, Vec{0, 2}));
  EXPECT_TRUE(schur_convex_leq(Vec{-1, -1}, Vec{0, -2}));
  EXPECT_TRUE(check_lemma_negation(Vec{0, 2}, Vec{1, 1}));
  EXPECT_FALSE(schur_convex_leq(Vec{0, -2}, Vec{-1, -1}));
}

TEST(Lemmas, ShiftExamples) {
  EXPECT_TRUE(check_lemma_shift(SortedProfile({0, 1}), SortedProfile({1, 2}), 0, 0));
  EXPECT_TRUE(check_lemma_shift(SortedProfile({0, 1}), SortedProfile({0, 1}), 1, 2));
  EXPECT_THROW(check_lemma_shift(SortedProfile({0, 1}), SortedProfile({0, 1}), 2, 1),
               PreconditionError);
  EXPECT_THROW(check_lemma_shift(SortedProfile({0, 1}), SortedProfile({0, 1}), -1, 0),
               PreconditionError);
}

TEST(Lemmas, ShiftReverseFailsForPositiveEqualShift) {
  // sort(u + e_1) = sort(v + e_1) = (2, 3) but u(2) = 3 > v(2) = 2.
  const SortedProfile u({1, 3});
  const SortedProfile v({2, 2});
  EXPECT_FALSE(prec(u, v));
  EXPECT_FALSE(check_lemma_shift_reverse(u, v, 1.0));
}

TEST(Lemmas, ShiftReverseHoldsForNonPositiveEqualShift) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20000; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    const SortedProfile u = dyadic_profile(rng, n);
    const SortedProfile v = dyadic_profile(rng, n);
    const double x = -static_cast<double>(rng() % 9) / 8.0;
    if (u[0] + x < 0.0 || v[0] + x < 0.0) continue;
    ASSERT_TRUE(check_lemma_shift_reverse(u, v, x));
  }
}

TEST(Lemmas, ConvexBatteryExamples) {
  EXPECT_TRUE(convex_symmetric_battery(Vec{1, 1}, Vec{0, 2}));
  EXPECT_TRUE(convex_symmetric_battery(Vec{4, -2, 1}, Vec{4, -2, 1}));
  EXPECT_THROW(convex_symmetric_battery(Vec{0, 2}, Vec{1, 1}), PreconditionError);
}

TEST(Lemmas, SortedDifferenceExamples) {
  EXPECT_TRUE(check_lemma_sorted_diff(Vec{0, 1, 5}, Vec{2, -1, 3}));
  EXPECT_TRUE(check_lemma_sorted_diff(Vec{2, 0}, Vec{0, 1}));
}

TEST(Lemmas, StarStabilityExamples) {
  EXPECT_TRUE(check_lemma_star_stability(SortedProfile({0, 1}), SortedProfile({1, 1}), 0.5, 2, 0.0));
  EXPECT_TRUE(check_lemma_star_stability(SortedProfile({0, 1}), SortedProfile({1, 1}), 0.0, 1, 3.0));
  EXPECT_THROW(
      check_lemma_star_stability(SortedProfile({0, 3}), SortedProfile({1, 1}), 0.0, 1, 0.0),
      PreconditionError);
  // u ≺_* v holds but u(1) = 1 > v(1) = 0.
  EXPECT_THROW(check_lemma_star_stability(SortedProfile({1, 1}), SortedProfile({0, 2}), 0.0, 1,
                                          1.0),
               PreconditionError);
}

TEST(Lemmas, MapComparisonExamples) {
  const SortedProfile u({0, 2, 2});
  const SortedProfile v({1, 1, 3});
  const Mark m(1, 0.5);
  EXPECT_EQ(kw_step(u, m), SortedProfile({0.5, 1.5, 1.5}));
  EXPECT_EQ(pth_step(v, m, 3), SortedProfile({0.5, 0.5, 3.5}));
  const auto both = check_lemma_map_comparison(u, v, m, 3);
  EXPECT_TRUE(both.jsw_vs_rank);
  EXPECT_TRUE(both.rank_vs_rank);

  const auto same = check_lemma_map_comparison(u, u, Mark(3, 0.25), 1);
  EXPECT_TRUE(same.jsw_vs_rank);
  EXPECT_TRUE(same.rank_vs_rank);

  EXPECT_THROW(check_lemma_map_comparison(u, v, m, 2), PreconditionError);
}

TEST(OrderingProperties, PrecImpliesPrecStar) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50000; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    const SortedProfile u = dyadic_profile(rng, n);
    const SortedProfile v = dyadic_profile(rng, n);
    if (prec(u, v)) {
      ASSERT_TRUE(prec_star(u, v));
    }
  }
}

TEST(OrderingProperties, RankOneOrderIsCoordinatewise) {
  std::mt19937_64 rng(32);
  std::size_t agreeing_true = 0;
  for (int trial = 0; trial < 50000; ++trial) {
    const std::size_t n = 1 + rng() % 4;
    const SortedProfile u = dyadic_profile(rng, n);
    const SortedProfile v = dyadic_profile(rng, n);
    const bool a = prec(u, v).holds();
    ASSERT_EQ(prec_p(u, v, 1).holds(), a);
    agreeing_true += a ? 1 : 0;
  }
  EXPECT_GT(agreeing_true, 1000u);
}

TEST(OrderingProperties, PrecStarMatchesRecomputedTailSums) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 50000; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    const SortedProfile u = dyadic_profile(rng, n);
    const SortedProfile v = dyadic_profile(rng, n);
    ASSERT_EQ(prec_star(u, v).holds(),
              oracle::tail_dominated(Vec(u.begin(), u.end()), Vec(v.begin(), v.end())));
  }
}

TEST(OrderingProperties, SchurConvexMatchesSubsetEnumeration) {
  std::mt19937_64 rng(34);
  std::size_t positives = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    Vec v = dyadic(rng, n, -24, 24);
    Vec u = v;
    // Half the time average two coordinates so the pair is comparable.
    if (n > 1 && rng() % 2) {
      const std::size_t i = rng() % n;
      const std::size_t j = (i + 1 + rng() % (n - 1)) % n;
      const double lambda = static_cast<double>(rng() % 9) / 8.0;
      const double a = u[i];
      const double b = u[j];
      u[i] = lambda * a + (1 - lambda) * b;
      u[j] = (1 - lambda) * a + lambda * b;
    } else {
      u = dyadic(rng, n, -24, 24);
    }
    const bool expected = oracle::majorized(u, v);
    ASSERT_EQ(schur_convex_leq(u, v).holds(), expected);
    positives += expected ? 1 : 0;
  }
  EXPECT_GT(positives, 5000u);
}

TEST(OrderingProperties, SchurConvexReflexiveAndTransitive) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 5000; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    const Vec a = dyadic(rng, n, -24, 24);
    ASSERT_TRUE(schur_convex_leq(a, a));
    Vec b = a;
    Vec c = a;
    // c is a spread of b which is a spread of a (reverse T-transforms):
    // a ≺_c b ≺_c c.
    if (n > 1) {
      std::sort(b.begin(), b.end());
      b.front() -= 0.5;
      b.back() += 0.5;
      c = b;
      c.front() -= 0.25;
      c.back() += 0.25;
      ASSERT_TRUE(schur_convex_leq(a, b));
      ASSERT_TRUE(schur_convex_leq(b, c));
      ASSERT_TRUE(schur_convex_leq(a, c));
    }
  }
}

TEST(OrderingProperties, PrecStarConsistentWithPadding) {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 20000; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    const SortedProfile u = dyadic_profile(rng, n);
    const SortedProfile v = dyadic_profile(rng, n);
    ASSERT_EQ(prec_star(u, v).holds(), prec_star(pad(u, n + 1), pad(v, n + 1)).holds());
  }
}

}  // namespace
}  // namespace parq
