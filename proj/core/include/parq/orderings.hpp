#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "parq/profile.hpp"

namespace parq {

// Outcome of an ordering test. When it fails, `violation` carries the first
// index (1-based) at which lhs > rhs + tol, and which clause failed.
struct OrderVerdict {
  struct Violation {
    std::string clause;  // "coord", "tail_sum" or "total"
    std::size_t index;
    double lhs;
    double rhs;
  };

  std::optional<Violation> violation;

  bool holds() const noexcept { return !violation.has_value(); }
  explicit operator bool() const noexcept { return holds(); }
};

// Coordinatewise order: u(i) <= v(i) + tol for all i.
OrderVerdict prec(const SortedProfile& u, const SortedProfile& v, double tol = 0.0);

// Tail-sum dominance: sum_{i>=k} u(i) <= sum_{i>=k} v(i) + tol for all k.
OrderVerdict prec_star(const SortedProfile& u, const SortedProfile& v, double tol = 0.0);

// u ≺_* v and u(l) <= v(l) for l in [rank, S]. The tail-sum clause is
// checked first.
OrderVerdict prec_p(const SortedProfile& u, const SortedProfile& v, std::size_t rank,
                    double tol = 0.0);

// Same as prec_p with separate slacks for the coordinate and the tail-sum
// clauses. Coupled-path checks use an exact coordinate test and a small
// slack on accumulated sums.
OrderVerdict prec_p(const SortedProfile& u, const SortedProfile& v, std::size_t rank,
                    double coord_tol, double sum_tol);

// Majorization on R^S: equal totals (within tol) and the sorted tail sums of
// u dominated by those of v for k >= 2.
OrderVerdict schur_convex_leq(std::span<const double> u, std::span<const double> v,
                              double tol = 0.0);

// The checkers below evaluate one instance of a comparison lemma and return
// whether it holds. On a premise-satisfying instance a false return is a bug.

// u ≺_c v and -u ≺_c -v agree.
bool check_lemma_negation(std::span<const double> u, std::span<const double> v,
                          double tol = 0.0);

// u ≺ v implies sort(u + x e_1) ≺ sort(v + y e_1), for x <= y. Throws
// PreconditionError if x > y or if a shifted entry would become negative.
bool check_lemma_shift(const SortedProfile& u, const SortedProfile& v, double x, double y,
                       double tol = 0.0);

// Reverse direction of the shift lemma. Only meaningful for x == y; see the
// unit tests for the x == y > 0 counterexample.
bool check_lemma_shift_reverse(const SortedProfile& u, const SortedProfile& v, double x,
                               double tol = 0.0);

// For u ≺_c v, evaluates a fixed battery of convex symmetric functions
// (max, sum of squares, sum of positive parts, sum of (x - c)^+ for several
// c, log-sum-exp) and returns whether F(u) <= F(v) + tol for every one.
// Throws PreconditionError when u ≺_c v fails at tol.
bool convex_symmetric_battery(std::span<const double> u, std::span<const double> v,
                              double tol = 1e-9);

// sort(u) - sort(v) ≺_c u - sort(v).
bool check_lemma_sorted_diff(std::span<const double> u, std::span<const double> v,
                             double tol = 1e-9);

// Given u ≺_* v, j (1-based) with u(j) <= v(j) and y >= 0:
//   [u - x 1]^+ ≺_* [v - x 1]^+  and  sort(u + y e_j) ≺_* sort(v + y e_j).
// Throws PreconditionError when a premise fails.
bool check_lemma_star_stability(const SortedProfile& u, const SortedProfile& v, double x,
                                std::size_t j, double y, double tol = 0.0);

struct MapComparison {
  bool jsw_vs_rank;   // kw_step(u) ≺_P pth_step(v, P)
  bool rank_vs_rank;  // pth_step(u, P) ≺_P pth_step(v, P)
};

// Given u ≺_P v, compares one step of the maps. Throws PreconditionError when
// u ≺_P v fails.
MapComparison check_lemma_map_comparison(const SortedProfile& u, const SortedProfile& v,
                                         const Mark& m, std::size_t rank, double tol = 0.0);

}  // namespace parq
