#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace parq {

struct LemmaSuiteOptions {
  std::size_t instances = 10'000;  // per lemma, all premise-satisfying
  std::size_t min_dim = 1;
  std::size_t max_dim = 8;
  std::uint64_t seed = 1;
  // Slack for instances drawn from continuous laws. Instances on the dyadic
  // grid (multiples of 1/8) are computed exactly and checked with zero slack.
  double tolerance = 1e-9;
  std::size_t max_reported = 5;
};

struct LemmaOutcome {
  std::string lemma;
  std::size_t instances = 0;
  std::size_t counterexamples = 0;
  std::vector<std::string> reported;  // first few counterexamples, verbatim
};

// Randomized property suites for the comparison lemmas:
//   negation_symmetry      u ≺_c v  <=>  -u ≺_c -v
//   shift_monotonicity     u ≺ v, x <= y  =>  sort(u + x e_1) ≺ sort(v + y e_1)
//   convex_battery         u ≺_c v  =>  F(u) <= F(v), F convex symmetric
//   sorted_difference      sort(u) - sort(v) ≺_c u - sort(v)
//   star_stability         drain and load steps preserve ≺_*
//   jsw_vs_rank_map        u ≺_P v  =>  G(u) ≺_P G^P(v)
//   rank_map_monotone      u ≺_P v  =>  G^P(u) ≺_P G^P(v)
// Premises are built constructively, so every instance satisfies them.
std::vector<LemmaOutcome> run_lemma_suites(const LemmaSuiteOptions& options);

}  // namespace parq
